"""Coherent n-PSK link simulation and analytic BER-floor prediction.

Closed-form models for intrinsic laser phase noise and equalization-enhanced
phase noise, a one-tap normalized LMS carrier phase estimator with a
differential-detection baseline, and a Monte Carlo harness that cross-checks
the closed forms against waveform-level simulation.
"""

__version__ = "0.1.0"

from .analytics import (
    FloorPrediction,
    ber_floor,
    ber_floor_with_eepn,
    gaussian_pdf,
    log10_ber_floor,
    log10_ser_floor,
    ser_floor,
)
from .channel import (
    DispersionSpec,
    SampleBlock,
    apply_phase,
    cd_memory_symbols,
    compensate_cd,
    downsample,
    propagate_cd,
    transmit,
    upsample,
)
from .constellation import (
    bits_per_symbol,
    constellation,
    gray_decode,
    gray_encode,
    gray_labels,
    modulate,
    random_symbols,
    slice_symbols,
)
from .cpe import (
    CpeOutput,
    LmsState,
    differential_encode,
    lms_step,
    run_differential,
    run_lms,
)
from .montecarlo import (
    BerEstimate,
    ExperimentConfig,
    SweepRow,
    measure_phase_error_variance,
    run_experiment,
    sweep,
    wilson_interval,
)
from .noisemodels import (
    LinkParams,
    PhaseTrajectory,
    awgn,
    eepn_variance,
    intrinsic_variance,
    total_variance,
    wiener_path,
)

__all__ = [
    "__version__",
    "FloorPrediction",
    "ber_floor",
    "ber_floor_with_eepn",
    "gaussian_pdf",
    "log10_ber_floor",
    "log10_ser_floor",
    "ser_floor",
    "DispersionSpec",
    "SampleBlock",
    "apply_phase",
    "cd_memory_symbols",
    "compensate_cd",
    "downsample",
    "propagate_cd",
    "transmit",
    "upsample",
    "bits_per_symbol",
    "constellation",
    "gray_decode",
    "gray_encode",
    "gray_labels",
    "modulate",
    "random_symbols",
    "slice_symbols",
    "CpeOutput",
    "LmsState",
    "differential_encode",
    "lms_step",
    "run_differential",
    "run_lms",
    "BerEstimate",
    "ExperimentConfig",
    "SweepRow",
    "measure_phase_error_variance",
    "run_experiment",
    "sweep",
    "wilson_interval",
    "LinkParams",
    "PhaseTrajectory",
    "awgn",
    "eepn_variance",
    "intrinsic_variance",
    "total_variance",
    "wiener_path",
]
