"""Spectral and dynamical diagnostics of the squeeze-driven Kerr oscillator.

The package models a Kerr-nonlinear bosonic mode under a two-photon drive,
whose excited spectrum hosts a quantum phase transition: below the critical
excitation energy K xi^2 the even/odd parity ladders pair up exponentially
("spectral kissing"), the density of states peaks there, and a quench from
the phase-space saddle point scrambles at the classical Lyapunov rate.
"""

__version__ = "0.1.0"

from .classical import (
    ClassicalParams,
    Trajectory,
    contour_points,
    dos_curve,
    grad_h,
    h_cl,
    hamilton_rhs,
    integrate_trajectory,
    linearize,
    lyapunov_origin,
    saddle_mode_decomposition,
    semiclassical_dos,
    separatrix_points,
    stationary_points,
)
from .dynamics import (
    PRESET_POINTS,
    Evolution,
    TimeSeries,
    default_time_grid,
    ehrenfest_prediction,
    ehrenfest_time,
    energy_distribution,
    evolve,
    expectation_series,
    fit_growth_rate,
    fotoc,
    husimi_entropy_series,
    long_time_average,
    norm_series,
    parity_series,
    preset_state,
    short_time_coefficients,
    survival_probability,
)
from .output import (
    RunConfig,
    RunWriter,
    sha256_file,
    verify_run,
    write_csv,
    write_json,
)
from .errors import (
    ConvergenceError,
    KerrFreePointError,
    KerrOscillatorError,
    ParityViolationError,
    StepSizeError,
    TruncationError,
)
from .fock import (
    LadderOps,
    MicroscopicParams,
    ModelParams,
    build_hamiltonian,
    coherent_state,
    coherent_tail_mass,
    is_hermitian,
    ladder_matrices,
    microscopic_map,
    parity_operator,
    parity_split,
    truncation_check,
)
from .phasespace import (
    HusimiGrid,
    default_grid,
    husimi_entropy,
    husimi_eval,
    m2_exact,
    m2_quadrature,
)
from .spectral import (
    DosHistogram,
    KissingSeries,
    SpectralDecomposition,
    diagonalize,
    dos_histogram,
    esqpt_energy,
    fit_log_gap,
    kissing_gaps,
    locate_esqpt,
    occupation_expectation,
    participation_ratio,
)


__all__ = [
    "ClassicalParams",
    "ConvergenceError",
    "DosHistogram",
    "Evolution",
    "HusimiGrid",
    "KerrFreePointError",
    "KerrOscillatorError",
    "KissingSeries",
    "LadderOps",
    "MicroscopicParams",
    "ModelParams",
    "ParityViolationError",
    "PRESET_POINTS",
    "SpectralDecomposition",
    "StepSizeError",
    "Trajectory",
    "TruncationError",
    "build_hamiltonian",
    "coherent_state",
    "coherent_tail_mass",
    "is_hermitian",
    "default_grid",
    "default_time_grid",
    "diagonalize",
    "dos_curve",
    "dos_histogram",
    "ehrenfest_prediction",
    "ehrenfest_time",
    "energy_distribution",
    "esqpt_energy",
    "evolve",
    "fit_growth_rate",
    "fit_log_gap",
    "fotoc",
    "h_cl",
    "husimi_entropy",
    "husimi_entropy_series",
    "husimi_eval",
    "integrate_trajectory",
    "kissing_gaps",
    "ladder_matrices",
    "linearize",
    "locate_esqpt",
    "long_time_average",
    "lyapunov_origin",
    "m2_exact",
    "m2_quadrature",
    "microscopic_map",
    "occupation_expectation",
    "parity_operator",
    "parity_split",
    "participation_ratio",
    "preset_state",
    "saddle_mode_decomposition",
    "semiclassical_dos",
    "contour_points",
    "grad_h",
    "hamilton_rhs",
    "separatrix_points",
    "short_time_coefficients",
    "stationary_points",
    "survival_probability",
    "TimeSeries",
    "expectation_series",
    "norm_series",
    "parity_series",
    "truncation_check",
    "__version__",
    "RunConfig",
    "RunWriter",
    "sha256_file",
    "verify_run",
    "write_csv",
    "write_json",
]
