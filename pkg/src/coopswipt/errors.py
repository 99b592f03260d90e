"""Exception types shared across the package."""


class CoopSwiptError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(CoopSwiptError, ValueError):
    """Invalid configuration value or malformed config input."""


class NumericalError(CoopSwiptError):
    """A numerical routine could not produce a valid result."""


class FactorizationError(NumericalError):
    """Cholesky factorization hit a non-positive pivot."""

    def __init__(self, pivot: int, message: str | None = None):
        self.pivot = pivot
        super().__init__(message or f"non-positive pivot at index {pivot}")


class DegenerateChannelError(NumericalError):
    """An all-zero vector or channel set where a nonzero one is required."""
