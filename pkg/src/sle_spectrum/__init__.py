"""Integral means spectrum of SLE: closed forms, boundary solutions and Monte Carlo."""

__version__ = "0.1.0"

from .errors import (
    BlowUpError,
    ConditionError,
    ConvergenceError,
    DomainError,
    HorizonWarning,
    MomentOverflowError,
    OptimizationError,
    OverflowDominatedError,
    PoleError,
    ScalesError,
    SpectrumError,
    StepSizeError,
)
from .exponents import (
    Branch,
    SleParams,
    Variant,
    average_spectrum,
    beta_exponent,
    conjectured_as_spectrum,
    gamma_exponent,
    spectrum_table,
)
from .loewner import DriverSpec, McConfig, simulate_compensated_path, simulate_paths
from .moments import (
    BulkIntegral,
    PointMoment,
    WholeIntegral,
    fit_spectrum_slope,
    integrated_moment,
    point_moment,
)
from .special import boundary_solutions, hyp2f1, log_gamma
