"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when input data violates a documented invariant."""


class NumericalError(RuntimeError):
    """Raised when an algorithm fails to converge or loses accuracy."""
