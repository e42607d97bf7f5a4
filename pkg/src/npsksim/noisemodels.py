"""Laser phase-noise generation and closed-form variance calculators.

A laser with a Lorentzian lineshape of 3-dB width df produces a random-walk
(Wiener) phase whose increment variance over a time step tau is 2*pi*df*tau.
The combined transmitter+LO walk sets the intrinsic per-symbol variance; the
interaction of the LO walk with electronically compensated fiber dispersion
adds the equalization-enhanced term, which grows with symbol rate while the
intrinsic term shrinks with it.
"""

from dataclasses import dataclass

import numpy as np
from scipy.constants import c as LIGHT_SPEED

from .constellation import validate_order

__all__ = [
    "LinkParams",
    "PhaseTrajectory",
    "intrinsic_variance",
    "eepn_variance",
    "total_variance",
    "wiener_path",
    "awgn",
    "S_PER_M2_PER_PS_NM_KM",
]

# 1 ps/(nm km) = 1e-12 s / (1e-9 m * 1e3 m)
S_PER_M2_PER_PS_NM_KM = 1e-6


@dataclass(frozen=True)
class LinkParams:
    """Physical constants of one link, all SI units.

    Attributes
    ----------
    lw_tx, lw_lo : float
        3-dB linewidths of the transmitter and local-oscillator lasers [Hz].
    ts : float
        Symbol period [s]; the symbol rate is 1/ts.
    disp : float
        Fiber dispersion coefficient [s/m^2]; may be negative
        (anomalous-dispersion or pre-compensated designs).
    length : float
        Fiber length [m].
    wavelength : float
        Carrier wavelength [m]; both lasers sit at the same frequency.
    order : int
        PSK constellation size n.
    """

    lw_tx: float
    lw_lo: float
    ts: float
    disp: float
    length: float
    wavelength: float
    order: int

    def __post_init__(self):
        validate_order(self.order)
        if self.lw_tx < 0 or self.lw_lo < 0:
            raise ValueError("laser linewidths must be >= 0")
        if not self.ts > 0:
            raise ValueError("symbol period must be > 0")
        if self.length < 0:
            raise ValueError("fiber length must be >= 0")
        if not self.wavelength > 0:
            raise ValueError("wavelength must be > 0")

    @property
    def symbol_rate(self) -> float:
        return 1.0 / self.ts

    @property
    def carrier_frequency(self) -> float:
        return LIGHT_SPEED / self.wavelength

    @classmethod
    def from_engineering(
        cls,
        order: int,
        lw_tx: float,
        lw_lo: float,
        baud: float,
        disp_ps_nm_km: float,
        length_km: float,
        lambda_nm: float = 1550.0,
    ) -> "LinkParams":
        """Build from the units used at the command line."""
        if not baud > 0:
            raise ValueError("symbol rate must be > 0")
        return cls(
            lw_tx=lw_tx,
            lw_lo=lw_lo,
            ts=1.0 / baud,
            disp=disp_ps_nm_km * S_PER_M2_PER_PS_NM_KM,
            length=length_km * 1e3,
            wavelength=lambda_nm * 1e-9,
            order=order,
        )


def intrinsic_variance(p: LinkParams) -> float:
    """Per-symbol variance of the combined Tx+LO phase-noise increments [rad^2]."""
    return 2.0 * np.pi * (p.lw_tx + p.lw_lo) * p.ts


def eepn_variance(p: LinkParams) -> float:
    """Equalization-enhanced phase-noise variance [rad^2].

    Driven solely by the LO linewidth; |disp * length| keeps the result
    nonnegative for either dispersion sign.
    """
    accumulated = abs(p.disp * p.length)
    return (np.pi * p.wavelength**2 / (2.0 * LIGHT_SPEED)) * accumulated * p.lw_lo / p.ts


def total_variance(p: LinkParams) -> float:
    """Intrinsic plus equalization-enhanced variance [rad^2]."""
    return intrinsic_variance(p) + eepn_variance(p)


@dataclass
class PhaseTrajectory:
    """One realized random-walk phase path, one value per sample [rad]."""

    phases: np.ndarray
    increment_variance: float

    def __len__(self) -> int:
        return len(self.phases)


def wiener_path(count: int, increment_variance: float, seed=None) -> PhaseTrajectory:
    """Random-walk phase path: phases[0] = 0, i.i.d. Gaussian increments.

    Parameters
    ----------
    count : int
        Number of samples (>= 1).
    increment_variance : float
        Variance of each per-sample increment [rad^2].
    seed
        Anything accepted by numpy.random.default_rng; fixed seed gives a
        reproducible path.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if increment_variance < 0:
        raise ValueError("increment variance must be >= 0")
    if increment_variance == 0:
        return PhaseTrajectory(np.zeros(count), 0.0)
    rng = np.random.default_rng(seed)
    steps = rng.normal(0.0, np.sqrt(increment_variance), size=count)
    steps[0] = 0.0
    return PhaseTrajectory(np.cumsum(steps), increment_variance)


def awgn(samples: np.ndarray, noise_variance_per_dim: float, seed=None) -> np.ndarray:
    """Add circular Gaussian noise, independent per real/imaginary part."""
    if noise_variance_per_dim < 0:
        raise ValueError("noise variance must be >= 0")
    samples = np.asarray(samples, dtype=np.complex128)
    if noise_variance_per_dim == 0:
        return samples.copy()
    rng = np.random.default_rng(seed)
    sigma = np.sqrt(noise_variance_per_dim)
    noise = rng.normal(0.0, sigma, samples.shape) + 1j * rng.normal(0.0, sigma, samples.shape)
    return samples + noise
