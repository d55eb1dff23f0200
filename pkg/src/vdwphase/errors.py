"""Exception hierarchy shared by all modules."""


class VdwError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(VdwError, ValueError):
    """An argument lies outside the domain of the requested function."""


class SupercriticalError(DomainError):
    """The temperature is at or above the critical temperature."""


class OutOfBandError(DomainError):
    """A pressure level lies outside the open spinodal band."""


class InfeasibleError(DomainError):
    """A two-phase construction was requested for a single-phase mean volume."""


class InadmissibleError(DomainError):
    """A (sigma, lambda) pair lies outside the admissible parameter domain."""


class ConvergenceError(VdwError, RuntimeError):
    """An iterative method failed to converge."""


class NoSolutionError(ConvergenceError):
    """No nonconstant steady state was found for the requested parameters."""

    def __init__(self, message, residual=None, threshold=None):
        super().__init__(message)
        self.residual = residual
        self.threshold = threshold


class QuadratureError(VdwError, RuntimeError):
    """A quadrature could not reach its tolerance or hit a degenerate integrand."""


class MeanViolationError(DomainError):
    """A perturbation expected to have zero mean does not."""


class CrossCheckError(VdwError, RuntimeError):
    """Two independent evaluation routes disagree beyond tolerance."""


class InsufficientDataError(DomainError):
    """Too few distinct data points for a fit."""
