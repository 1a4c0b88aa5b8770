"""Exception types raised across the package."""


class BoostError(Exception):
    """Base class for all package errors."""


class PreconditionError(BoostError, ValueError):
    """An argument violates a documented precondition."""


class EmptyDataset(PreconditionError):
    """An operation that needs at least one sample received none."""


class NumericFailure(BoostError, ArithmeticError):
    """A computation produced a non-finite value or failed to converge.

    ``iteration`` is set when the failure happened inside a boosting run.
    """

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


class Unbounded(NumericFailure):
    """A one-dimensional objective has no finite minimiser."""


class DegenerateDirection(PreconditionError):
    """A basis function vanishes on every sample."""


class ConfigError(BoostError):
    """Malformed experiment configuration; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DomainError(PreconditionError, ArithmeticError):
    """A numeric argument lies outside a function's domain."""
