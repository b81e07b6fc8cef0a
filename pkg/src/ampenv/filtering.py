"""Apply a second-order-section design to signals.

Two modes: single-pass causal filtering with explicit carried state (for
streaming; has the filter's group delay) and zero-phase forward-backward
filtering (offline; no phase shift, squared magnitude response). Both are
pure: state is a value the caller threads through, never shared mutable
data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from . import kernels
from .filter_design import FilterDesign
from .signals import BunchSpec, Signal, bunch_max, rectify


@dataclass(frozen=True, eq=False)
class FilterState:
    """Delay-line values of the cascade, one (s0, s1) pair per section."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("state must have shape (n_sections, 2)")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def zeros(cls, design: FilterDesign) -> "FilterState":
        return cls(np.zeros((design.n_sections, 2)))


def filter_causal(
    design: FilterDesign, s: Signal, state: FilterState | None = None
) -> tuple[Signal, FilterState]:
    """Single-pass forward filtering; returns (output, final state).

    Feeding the returned state into the next call continues seamlessly:
    filtering two chunks with carried state equals filtering their
    concatenation with a fresh state.
    """
    if state is None:
        state = FilterState.zeros(design)
    if state.values.shape != (design.n_sections, 2):
        raise ValueError(
            "state dimension mismatch: state has %d sections, design has %d"
            % (state.values.shape[0], design.n_sections)
        )
    y, zf = kernels.sos_filter(design.sections, s.samples, state.values)
    return Signal._wrap(y, s.sample_rate), FilterState(zf)


def _step_state(sections: np.ndarray, level: float) -> np.ndarray:
    """Section states at the fixed point for a constant input ``level``.

    Solves, per section, the steady state of the transposed direct-form II
    recurrence under constant drive, cascading the section's DC output into
    the next section's input.
    """
    z = np.empty((sections.shape[0], 2))
    u = level
    for i, (b0, b1, b2, a1, a2) in enumerate(sections):
        y = u * (b0 + b1 + b2) / (1.0 + a1 + a2)
        z[i, 0] = (b1 + b2) * u - (a1 + a2) * y
        z[i, 1] = b2 * u - a2 * y
        u = y
    return z


def default_pad_len(design: FilterDesign) -> int:
    return 3 * (2 * design.order + 1)


def filtfilt_zero_phase(
    design: FilterDesign, s: Signal, pad_len: int | None = None
) -> Signal:
    """Zero-phase filtering: forward pass, then backward pass.

    The effective magnitude response is |H|^2 and the phase response is
    identically zero, so features stay time-aligned with the input. End
    transients are suppressed by odd-symmetric reflection padding
    (``pad_len`` samples per side, default 3 * (2 * order + 1)) and by
    starting each pass from the steady state for a step at the first padded
    sample; constants and linear trends pass through unchanged. Needs future
    samples, so offline use only.
    """
    x = s.samples
    pad = default_pad_len(design) if pad_len is None else int(pad_len)
    if pad < 0:
        raise ValueError("invalid pad length: %r" % (pad_len,))
    if len(x) <= pad:
        raise ValueError(
            "signal shorter than filter transient pad (%d samples <= pad %d)"
            % (len(x), pad)
        )
    if pad:
        ext = np.concatenate(
            (2.0 * x[0] - x[pad:0:-1], x, 2.0 * x[-1] - x[-2 : -pad - 2 : -1])
        )
    else:
        ext = x
    fwd, _ = kernels.sos_filter(design.sections, ext, _step_state(design.sections, ext[0]))
    rev = fwd[::-1].copy()
    bwd, _ = kernels.sos_filter(design.sections, rev, _step_state(design.sections, rev[0]))
    out = bwd[::-1]
    if pad:
        out = out[pad:-pad]
    return Signal._wrap(out.copy(), s.sample_rate)


def chunked_envelope_stream(
    design: FilterDesign, spec: BunchSpec | int, chunks: Iterable[Signal]
) -> Iterator[Signal]:
    """Causal envelope pipeline over a chunk stream.

    Each chunk is rectified, bunch-maxed, and run through the causal filter
    with state carried across chunks, so the concatenated output equals the
    offline causal pipeline on the concatenated input. Chunks must be
    nonempty multiples of the bunch size and share one sample rate. This
    mode is causal: it has the single-pass filter's group delay and is not
    zero-phase.
    """
    if not isinstance(spec, BunchSpec):
        spec = BunchSpec(spec)
    state = FilterState.zeros(design)
    rate = None
    for chunk in chunks:
        if len(chunk) == 0 or len(chunk) % spec.bunch_size:
            raise ValueError(
                "chunk not bunch-aligned: length %d is not a positive multiple of %d"
                % (len(chunk), spec.bunch_size)
            )
        if rate is None:
            rate = chunk.sample_rate
        elif chunk.sample_rate != rate:
            raise ValueError(
                "inconsistent sample rate: %g Hz after %g Hz" % (chunk.sample_rate, rate)
            )
        staircase = bunch_max(rectify(chunk), spec)
        out, state = filter_causal(design, staircase, state)
        yield out
