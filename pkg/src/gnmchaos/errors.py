"""Exception and warning types raised across the package."""


class GnmError(Exception):
    """Base class for all package errors."""


class ConfigurationError(GnmError, ValueError):
    """Invalid parameters, schedules, sweep specs or gate configurations."""


class DomainError(GnmError, ValueError):
    """A map was evaluated outside its interval."""


class ExtrapolationError(DomainError):
    """A tabulated map was evaluated outside its knot range."""


class NotConjugateError(GnmError, ValueError):
    """The surrogate has no exact logistic conjugate (gamma != 0)."""


class TableParseError(GnmError, ValueError):
    """A transfer-curve table could not be parsed."""

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class GridTooLargeError(ConfigurationError):
    """A search grid exceeds the evaluation cap."""

    def __init__(self, size, cap):
        self.size = size
        self.cap = cap
        super().__init__(f"search grid has {size} evaluations, cap is {cap}")


class ClippingWarning(UserWarning):
    """An orbit left the map interval and was clipped back into it."""
