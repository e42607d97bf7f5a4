"""Carrier phase estimation: one-tap normalized LMS and the differential baseline.

The single complex tap w tracks the carrier phase through the feedback
recursion y(k) = w(k) x(k), e(k) = d(k) - y(k),
w(k+1) = w(k) + mu / |x(k)|^2 * e(k) * conj(x(k)).
At mu = 1 the update aligns the tap exactly to the reference each step, so
the residual error at the next symbol is the new one-symbol phase increment,
which is also precisely what differential detection sees.
"""

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .constellation import constellation, slice_symbols, validate_order

__all__ = [
    "LmsState",
    "CpeOutput",
    "lms_step",
    "run_lms",
    "run_differential",
    "differential_encode",
]


@dataclass(frozen=True)
class LmsState:
    """Tap weight and step size of the one-tap equalizer."""

    w: complex
    mu: float

    def __post_init__(self):
        if not (np.isfinite(self.w.real) and np.isfinite(self.w.imag)):
            raise ValueError("tap weight must be finite")
        if not 0.0 < self.mu < 2.0:
            raise ValueError("step size must be in (0, 2)")


@dataclass
class CpeOutput:
    """Per-symbol receiver outputs; all arrays share one length."""

    decided: np.ndarray    # sliced symbol indices
    equalized: np.ndarray  # y(k) = w(k) x(k)
    tap_phase: np.ndarray  # arg w(k) before the k-th update
    skipped: int = 0       # zero-modulus inputs left unequalized


def lms_step(state: LmsState, x: complex, d: complex):
    """One recursion step; returns (y, e, next_state).

    A zero input sample is rejected because the power normalization is
    undefined there.
    """
    if x == 0:
        raise ValueError("zero input sample: power normalization undefined")
    y = state.w * x
    e = d - y
    w_next = state.w + state.mu / abs(x) ** 2 * e * np.conj(x)
    return y, e, LmsState(complex(w_next), state.mu)


@njit(cache=True)
def _lms_kernel(x, train, n_train, points, mu, w0):
    num = x.shape[0]
    n = points.shape[0]
    decided = np.empty(num, np.int64)
    equalized = np.empty(num, np.complex128)
    tap_phase = np.empty(num, np.float64)
    skipped = 0
    w = w0
    two_pi = 2.0 * np.pi
    for k in range(num):
        tap_phase[k] = math.atan2(w.imag, w.real)
        xk = x[k]
        y = w * xk
        equalized[k] = y
        # Angular slicer; boundary ties go to the lower index, matching
        # constellation.slice_symbols.
        ang = math.atan2(y.imag, y.real)
        v = ang * n / two_pi
        upper = math.floor(v + 0.5)
        u = int(upper)
        if v + 0.5 == upper:
            m = min(u % n, (u - 1) % n)
        else:
            m = u % n
        decided[k] = m
        power = xk.real * xk.real + xk.imag * xk.imag
        if power == 0.0:
            skipped += 1
            continue
        d = points[train[k]] if k < n_train else points[m]
        e = d - y
        w = w + mu / power * e * xk.conjugate()
    return decided, equalized, tap_phase, skipped


def run_lms(
    received: np.ndarray,
    order: int,
    mu: float = 1.0,
    training=None,
    initial_tap: complex = 1.0 + 0.0j,
) -> CpeOutput:
    """Decision-directed one-tap LMS over a symbol sequence.

    Parameters
    ----------
    received : array of complex
        Decision-point samples, one per symbol.
    order : int
        PSK constellation size.
    mu : float
        Step size in (0, 2); 1.0 corrects the full observed error each step.
    training : sequence of int, optional
        Known symbol indices used as the reference for the leading symbols;
        decisions take over afterwards. Pass the full transmitted sequence for
        data-aided operation. Zero-modulus samples are skipped with the tap
        unchanged and counted in the output.
    """
    n = validate_order(order)
    received = np.ascontiguousarray(received, dtype=np.complex128)
    if received.size == 0:
        raise ValueError("received sequence must be non-empty")
    LmsState(complex(initial_tap), mu)  # reuses the validity checks
    if training is None:
        train = np.empty(0, dtype=np.int64)
    else:
        train = np.ascontiguousarray(training, dtype=np.int64)
        if train.size and (train.min() < 0 or train.max() >= n):
            raise ValueError(f"training index out of range [0, {n})")
        if train.size > received.size:
            train = train[: received.size]
    points = constellation(n)
    decided, equalized, tap_phase, skipped = _lms_kernel(
        received, train, train.size, points, float(mu), complex(initial_tap)
    )
    return CpeOutput(decided, equalized, tap_phase, skipped)


def run_differential(received: np.ndarray, order: int) -> np.ndarray:
    """Decode phase increments between consecutive symbols.

    Returns len(received) - 1 indices; pair with differential_encode at the
    transmitter to carry data on the increments.
    """
    n = validate_order(order)
    received = np.asarray(received, dtype=np.complex128)
    if received.size < 2:
        raise ValueError("differential detection needs at least 2 symbols")
    return slice_symbols(received[1:] * np.conj(received[:-1]), n)


def differential_encode(increments: np.ndarray, order: int, start: int = 0) -> np.ndarray:
    """Turn increment data into transmitted indices, reference symbol first."""
    n = validate_order(order)
    increments = np.asarray(increments, dtype=np.int64)
    if increments.size and (increments.min() < 0 or increments.max() >= n):
        raise ValueError(f"increment index out of range [0, {n})")
    out = np.empty(increments.size + 1, dtype=np.int64)
    out[0] = start
    np.cumsum(increments, out=out[1:])
    out[1:] = (out[1:] + start) % n
    return out
