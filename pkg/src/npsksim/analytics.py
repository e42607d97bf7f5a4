"""Closed-form predictors: increment pdf, tail symbol-error rate, BER floors.

A decision is error-free while the per-symbol phase-error increment stays
inside (-pi/n, pi/n). For a zero-mean Gaussian increment of variance sigma^2
the escape probability is erfc(pi / (n * sqrt(2) * sigma)); dividing by
log2(n) converts symbol errors to bit errors under Gray labels, where an
adjacent-region error flips exactly one bit.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, log_ndtr

from .constellation import bits_per_symbol, validate_order
from .noisemodels import LinkParams, total_variance

__all__ = [
    "FloorPrediction",
    "gaussian_pdf",
    "ser_floor",
    "ber_floor",
    "log10_ser_floor",
    "log10_ber_floor",
    "ber_floor_with_eepn",
    "MIN_PROBABILITY",
]

# Below this the double-precision erfc tail is no longer trustworthy; results
# clamp to 0 and the prediction carries an underflow flag. Log-domain values
# stay finite far beyond it.
MIN_PROBABILITY = 1e-300

_LN2 = math.log(2.0)
_LN10 = math.log(10.0)


@dataclass(frozen=True)
class FloorPrediction:
    """SER and BER floor evaluated at one noise variance."""

    sigma_sq: float
    ser: float
    ber_floor: float
    includes_eepn: bool
    underflow: bool = False


def gaussian_pdf(x, sigma_sq: float):
    """Zero-mean Gaussian density with variance sigma_sq."""
    if not sigma_sq > 0:
        raise ValueError("variance must be > 0")
    x = np.asarray(x, dtype=np.float64)
    out = np.exp(-(x**2) / (2.0 * sigma_sq)) / np.sqrt(2.0 * np.pi * sigma_sq)
    return float(out) if out.ndim == 0 else out


def _tail_argument(sigma_sq: float, order: int) -> float:
    n = validate_order(order)
    if sigma_sq < 0:
        raise ValueError("variance must be >= 0")
    if sigma_sq == 0:
        return math.inf
    return math.pi / (n * math.sqrt(2.0 * sigma_sq))


def ser_floor(sigma_sq: float, order: int) -> float:
    """Probability that a Gaussian increment escapes the +-pi/n region."""
    z = _tail_argument(sigma_sq, order)
    if z == math.inf:
        return 0.0
    p = float(erfc(z))
    return 0.0 if p < MIN_PROBABILITY else p


def ber_floor(sigma_sq: float, order: int) -> float:
    """Symbol-error floor divided by bits per symbol."""
    return ser_floor(sigma_sq, order) / bits_per_symbol(order)


def log10_ser_floor(sigma_sq: float, order: int) -> float:
    """log10 of the SER floor, finite far below the double-precision range.

    Uses the identity erfc(z) = 2 * Phi(-z * sqrt(2)) evaluated in the log
    domain, so figure-style sweeps spanning hundreds of orders of magnitude
    stay strictly monotone.
    """
    z = _tail_argument(sigma_sq, order)
    if z == math.inf:
        return -math.inf
    return (_LN2 + float(log_ndtr(-z * math.sqrt(2.0)))) / _LN10


def log10_ber_floor(sigma_sq: float, order: int) -> float:
    return log10_ser_floor(sigma_sq, order) - math.log10(bits_per_symbol(order))


def ber_floor_with_eepn(p: LinkParams) -> FloorPrediction:
    """Floor prediction at the link's total (intrinsic + enhanced) variance.

    With zero fiber length this reduces to the intrinsic-only floor.
    """
    sigma_sq = total_variance(p)
    ser = ser_floor(sigma_sq, p.order)
    return FloorPrediction(
        sigma_sq=sigma_sq,
        ser=ser,
        ber_floor=ser / bits_per_symbol(p.order),
        includes_eepn=True,
        underflow=sigma_sq > 0 and ser == 0.0,
    )
