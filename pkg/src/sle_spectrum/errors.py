"""Exception and warning classes shared by the package."""


class SpectrumError(Exception):
    """Base class for all errors raised by :mod:`sle_spectrum`."""


class DomainError(SpectrumError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class PoleError(DomainError):
    """A Gamma function or hypergeometric parameter hit a pole."""


class ConditionError(DomainError):
    """The bounded positive boundary solution does not exist for these parameters."""


class ConvergenceError(SpectrumError, ArithmeticError):
    """A series or iteration failed to converge within its budget."""


class OptimizationError(SpectrumError, ArithmeticError):
    """Bracketing of a maximum failed."""


class StepSizeError(SpectrumError, ArithmeticError):
    """An integration step left the exterior of the unit disc."""


class BlowUpError(SpectrumError, ArithmeticError):
    """Too many trajectories were absorbed by the driving point."""


class OverflowDominatedError(SpectrumError, ArithmeticError):
    """Too many Monte Carlo paths were capped for the estimate to be trusted."""


class HorizonWarning(RuntimeWarning):
    """A trajectory hit the time horizon before reaching the stopping radius."""


class ScalesError(DomainError):
    """A slope fit was given too few scales, or scales out of order."""


class MomentOverflowError(SpectrumError, OverflowError):
    """A moment estimate does not fit in double precision even after rescaling."""
