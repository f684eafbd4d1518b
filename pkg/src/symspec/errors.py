"""Exception types raised by symspec."""


class SymspecError(Exception):
    """Base class for all library errors."""


class ValidationError(SymspecError, ValueError):
    """An argument violates a documented precondition."""


class CapacityError(ValidationError):
    """A request exceeds a hard size cap (e.g. enumerating S_k for large k)."""


class InsufficientDataError(ValidationError):
    """The series is too short for the requested lags."""


class SymmetryError(ValidationError):
    """A window, kernel or combiner failed a required symmetry check."""
