"""Synthetic test signals, method-comparison metrics, and runtime benchmarks.

The generators return the exact modulation envelope used in synthesis, so
estimator error can be measured against ground truth instead of by eye.
``compare_methods`` runs any set of configured estimators over one signal
and reports tracking error, peak and mean level ratios, and wall-clock
runtime per method.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .envelopes import (
    EnvelopeParams,
    envelope_follower,
    envelope_hilbert,
    envelope_rms,
    three_step_envelope,
)
from .signals import Signal

SYNTH_KINDS = ("am_tone", "multi_carrier_am", "chirp_am", "noise_burst")

METHODS = ("three_step", "follower", "rms", "hilbert")


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a signal with a known modulation envelope.

    ``carrier_hz`` is a single frequency for ``am_tone``, a (start, end)
    pair for ``chirp_am``, and any number of components for
    ``multi_carrier_am``; ``noise_burst`` ignores it and uses seeded white
    noise as the carrier. The modulation is
    (1 + depth * sin(2 pi f_mod t)) / (1 + depth), so the true envelope
    peaks at 1; the carrier (or mixture, or noise) is normalized to peak 1
    as well.
    """

    kind: str = "am_tone"
    carrier_hz: float | tuple[float, ...] = 2000.0
    modulator_hz: float = 5.0
    depth: float = 0.5
    duration_s: float = 2.0
    sample_rate_hz: float = 44100.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SYNTH_KINDS:
            raise ValueError("unknown synthetic kind: %r (use one of %s)" % (self.kind, ", ".join(SYNTH_KINDS)))
        carriers = self.carrier_hz
        if np.isscalar(carriers):
            carriers = (float(carriers),)
        else:
            carriers = tuple(float(c) for c in carriers)
        object.__setattr__(self, "carrier_hz", carriers)
        if float(self.duration_s) <= 0.0:
            raise ValueError("duration must be positive")
        if float(self.sample_rate_hz) <= 0.0:
            raise ValueError("sample rate must be positive")
        if not 0.0 <= float(self.depth) <= 1.0:
            raise ValueError("depth must be in [0, 1]")
        nyquist = float(self.sample_rate_hz) / 2.0
        if self.kind != "noise_burst":
            for c in carriers:
                if c <= 0.0:
                    raise ValueError("carrier must be positive")
                if c >= nyquist:
                    raise ValueError("carrier at or above Nyquist: %g Hz >= %g Hz" % (c, nyquist))
            if float(self.modulator_hz) >= min(carriers):
                raise ValueError("modulator must be below the carrier")
        if float(self.modulator_hz) <= 0.0:
            raise ValueError("modulator must be positive")
        if self.kind == "chirp_am" and len(carriers) != 2:
            raise ValueError("chirp_am needs (start, end) carrier frequencies")
        if self.kind == "am_tone" and len(carriers) != 1:
            raise ValueError("am_tone takes a single carrier frequency")


def generate(spec: SyntheticSpec) -> tuple[Signal, Signal]:
    """Synthesize (signal, true_envelope) for a spec."""
    fs = float(spec.sample_rate_hz)
    n = int(round(float(spec.duration_s) * fs))
    if n < 1:
        raise ValueError("duration too short for sample rate: no samples")
    t = np.arange(n) / fs
    depth = float(spec.depth)
    env = (1.0 + depth * np.sin(2.0 * np.pi * float(spec.modulator_hz) * t)) / (1.0 + depth)

    if spec.kind == "am_tone":
        carrier = np.sin(2.0 * np.pi * spec.carrier_hz[0] * t)
    elif spec.kind == "multi_carrier_am":
        carrier = np.zeros(n)
        for c in spec.carrier_hz:
            carrier += np.sin(2.0 * np.pi * c * t)
        carrier /= np.max(np.abs(carrier))
    elif spec.kind == "chirp_am":
        f0, f1 = spec.carrier_hz
        duration = n / fs
        carrier = np.sin(2.0 * np.pi * (f0 * t + (f1 - f0) * t * t / (2.0 * duration)))
    else:  # noise_burst
        carrier = np.random.default_rng(spec.seed).standard_normal(n)
        carrier /= np.max(np.abs(carrier))

    return Signal._wrap(env * carrier, fs), Signal._wrap(env, fs)


@dataclass(frozen=True)
class MethodReport:
    """One comparison row: error and level metrics for a single method."""

    method: str
    param_summary: str
    rmse_rel: float
    peak_ratio: float
    mean_ratio: float
    runtime_ms: float


@dataclass(frozen=True)
class ComparisonReport:
    """Per-method metrics against ground truth or the peak-hold reference.

    ``reference`` is "ground_truth" when a true envelope was supplied;
    otherwise metrics are relative to the three_step result and must not be
    read as accuracy.
    """

    rows: tuple[MethodReport, ...]
    reference: str

    CSV_HEADER = "method,param_summary,rmse_rel,peak_ratio,mean_ratio,runtime_ms"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for r in self.rows:
            lines.append(
                "%s,%s,%.9g,%.9g,%.9g,%.9g"
                % (r.method, r.param_summary, r.rmse_rel, r.peak_ratio, r.mean_ratio, r.runtime_ms)
            )
        return "\n".join(lines) + "\n"

    def to_table(self) -> str:
        header = ("method", "params", "rmse_rel", "peak_ratio", "mean_ratio", "runtime_ms")
        body = [
            (r.method, r.param_summary, "%.4f" % r.rmse_rel, "%.4f" % r.peak_ratio,
             "%.4f" % r.mean_ratio, "%.3f" % r.runtime_ms)
            for r in self.rows
        ]
        widths = [max(len(header[i]), *(len(row[i]) for row in body)) for i in range(len(header))]
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
        for row in body:
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
        lines.append("reference = %s" % self.reference)
        return "\n".join(lines)


def _bind_method(method: str, params, s: Signal):
    """Resolve a (method, params) config into a zero-arg callable and a label."""
    if method == "three_step":
        p = params if isinstance(params, EnvelopeParams) else EnvelopeParams(**(params or {}))
        label = "N=%d fc=%gHz order=%d" % (p.bunch_size, p.cutoff_hz, p.filter_order)
        return (lambda: three_step_envelope(s, p)), label
    if method == "follower":
        p = dict(params or {})
        cutoff = float(p.get("cutoff_hz", 150.0))
        order = int(p.get("filter_order", 4))
        label = "fc=%gHz order=%d" % (cutoff, order)
        return (lambda: envelope_follower(s, cutoff, order)), label
    if method == "rms":
        p = dict(params or {})
        window = int(p.get("window_samples", 50))
        label = "window=%d" % window
        return (lambda: envelope_rms(s, window)), label
    if method == "hilbert":
        return (lambda: envelope_hilbert(s)), "-"
    raise ValueError("unknown method: %r" % (method,))


def _ratio(num: float, den: float) -> float:
    if den == 0.0:
        return 0.0 if num == 0.0 else float("inf")
    return num / den


def compare_methods(
    s: Signal,
    truth: Signal | None = None,
    configs: list[tuple[str, dict]] | None = None,
) -> ComparisonReport:
    """Run each configured method on ``s`` and report metrics.

    Metrics are evaluated over the central 80% of samples, away from filter
    and transform edge transients. Without ground truth the three_step
    result is the reference (a three_step config must then be present) and
    the report says so. Runtime is the median of 5 runs after 1 warmup.
    """
    if not configs:
        raise ValueError("no methods configured")
    if truth is not None and len(truth) != len(s):
        raise ValueError(
            "signal length mismatch: truth has %d samples, signal %d" % (len(truth), len(s))
        )

    runs = []
    for method, params in configs:
        fn, label = _bind_method(method, params, s)
        result = fn()  # warmup; also the output used for metrics
        runtime_ms = measure_runtime_ms(fn, repeats=5, warmup=0)
        runs.append((method, label, result.envelope.samples, runtime_ms))

    if truth is not None:
        reference = "ground_truth"
        ref = truth.samples
    else:
        reference = "three_step"
        ref = next((est for m, _, est, _ in runs if m == "three_step"), None)
        if ref is None:
            raise ValueError("no reference available: supply truth or a three_step config")

    n = len(s)
    lo, hi = n // 10, n - n // 10
    ref_w = ref[lo:hi]
    ref_rms = float(np.sqrt(np.mean(ref_w * ref_w))) if ref_w.size else 0.0

    rows = []
    for method, label, est, runtime_ms in runs:
        est_w = est[lo:hi]
        err = est_w - ref_w
        rows.append(
            MethodReport(
                method=method,
                param_summary=label,
                rmse_rel=_ratio(float(np.sqrt(np.mean(err * err))), ref_rms),
                peak_ratio=_ratio(float(est_w.max()), float(ref_w.max())),
                mean_ratio=_ratio(float(est_w.mean()), float(ref_w.mean())),
                runtime_ms=runtime_ms,
            )
        )
    return ComparisonReport(tuple(rows), reference)


def measure_runtime_ms(fn, repeats: int = 5, warmup: int = 1) -> float:
    """Median wall time of ``fn()`` over ``repeats`` calls after ``warmup``."""
    for _ in range(warmup):
        fn()
    times = np.empty(repeats)
    for i in range(repeats):
        t0 = time.perf_counter()
        fn()
        times[i] = time.perf_counter() - t0
    return float(np.median(times)) * 1e3


def three_step_runtime_ms(
    duration_s: float = 1.5,
    sample_rate_hz: float = 44100.0,
    params: EnvelopeParams | None = None,
    repeats: int = 5,
    warmup: int = 1,
) -> float:
    """Median runtime of the full peak-hold pipeline on a synthetic AM tone."""
    sig, _ = generate(SyntheticSpec(duration_s=duration_s, sample_rate_hz=sample_rate_hz))
    p = params if params is not None else EnvelopeParams()
    return measure_runtime_ms(lambda: three_step_envelope(sig, p), repeats, warmup)


def benchmark_backends(
    duration_s: float = 1.5,
    sample_rate_hz: float = 44100.0,
    params: EnvelopeParams | None = None,
    backends: tuple[str, ...] | None = None,
) -> dict[str, float]:
    """Time the pipeline under each kernel backend; returns {backend: ms}."""
    out = {}
    for name in backends if backends is not None else kernels.available_backends():
        with kernels.backend(name):
            out[name] = three_step_runtime_ms(duration_s, sample_rate_hz, params)
    return out
