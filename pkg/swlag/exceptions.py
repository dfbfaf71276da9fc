"""Custom exceptions for the swlag library."""


class SwlagError(Exception):
    """Base exception for swlag."""

    pass


class DomainError(SwlagError):
    """Raised when an argument lies outside the domain of an operation."""

    pass


class BranchCutError(DomainError):
    """Raised when a power is requested on the branch cut (-inf, 0]."""

    pass


class SingularPointError(SwlagError):
    """Raised when a log-derivative is requested at a zero of phi."""

    pass


class PhaseUndefined(SwlagError):
    """Raised when the unit phase of phi has no limit (boundary point -1)."""

    pass


class AngleUndefined(SwlagError):
    """Raised when the Lagrangian angle is requested where the conformal factor vanishes."""

    pass


class QuadratureError(SwlagError):
    """Raised when a quadrature rule is under-resolved."""

    pass


class UnwrapError(SwlagError):
    """Raised when argument unwrapping fails to resolve a winding number."""

    pass


class ResolutionError(SwlagError):
    """Raised when a radius is too close to the circle for the boundary grid."""

    pass


class AliasError(SwlagError):
    """Raised when angular sampling is too coarse for the requested modes."""

    pass


class FitError(SwlagError):
    """Raised when a log-log fit is of insufficient quality."""

    pass


class InconclusiveError(SwlagError):
    """Raised when a singularity cannot be classified."""

    def __init__(self, message: str, fit=None) -> None:
        """Initialize with the partial fit."""
        super().__init__(message)
        self.fit = fit


class ConfigError(SwlagError):
    """Raised when a run configuration is invalid."""

    pass


class ExportError(SwlagError):
    """Raised when a report or mesh cannot be written."""

    pass


class ParameterWarning(SwlagError, UserWarning):
    """Raised when an exponent pair violates s < 2/p - 1."""

    pass


class NonconvergenceWarning(SwlagError, UserWarning):
    """Issued when a refinement study is not stable."""

    pass
