"""Exception hierarchy shared across the package."""


class OmmsimError(Exception):
    """Base class for all package errors."""


class ConfigError(OmmsimError):
    """Malformed configuration text or invalid parameter values.

    Carries the 1-based line number of the offending line when available.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SpecError(OmmsimError):
    """Invalid sweep specification (bad parameter path, bad axis)."""


class DomainError(OmmsimError, ValueError):
    """Input outside the mathematical domain of an operation."""


class SingularityError(OmmsimError):
    """Exact zero denominator in a steady-state expression."""


class ConvergenceError(OmmsimError):
    """Fixed-point iteration exhausted its budget.

    ``residual`` holds the last observed relative change.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class StabilityError(OmmsimError):
    """A stable drift matrix was required but not provided."""


class NumericalError(OmmsimError):
    """A linear-algebra routine failed or missed its accuracy contract."""


class PhysicalityWarning(UserWarning):
    """A covariance matrix violates the uncertainty bound."""
