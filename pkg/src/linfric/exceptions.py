"""Custom exceptions for linfric."""

from typing import Any, Optional


class LinfricError(Exception):
    """Base exception for all linfric errors."""

    exit_code: int = 1

    def __init__(
        self,
        message: str,
        exit_code: Optional[int] = None,
        details: Optional[Any] = None,
    ) -> None:
        super().__init__(message)
        self.message = message
        if exit_code is not None:
            self.exit_code = exit_code
        self.details = details


class ConfigError(LinfricError):
    """Raised when a run configuration or command-line flag is invalid."""

    exit_code = 2


class DataError(LinfricError):
    """Raised when measurement data cannot be used."""

    exit_code = 3


class ParseError(DataError):
    """Raised when a CSV value cannot be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, **kwargs: Any) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, **kwargs)
        self.line = line


class SchemaError(DataError):
    """Raised when a CSV file lacks required columns."""

    pass


class MonotonicityError(ParseError):
    """Raised when timestamps are not strictly ascending."""

    pass


class RangeError(DataError):
    """Raised when a train/test split is invalid or yields an empty part."""

    pass


class OutOfRangeError(DataError):
    """Raised when a lagged lookup reaches before the start of a series."""

    pass


class InsufficientSpanError(DataError):
    """Raised when a series is too short for the requested horizon."""

    pass


class NumericError(LinfricError):
    """Base exception for numerical failures."""

    exit_code = 4


class InvalidInputError(NumericError, ValueError):
    """Raised when a physical input violates an operation's preconditions."""

    pass


class DegenerateInputError(NumericError):
    """Raised when the inputs leave the requested quantity undefined."""

    pass


class ConvergenceError(NumericError):
    """Raised when the outlet-pressure fixed point does not converge."""

    pass


class NonPhysicalResultError(NumericError):
    """Raised when a solve produces a nonpositive pressure."""

    pass


class RangeWarning(UserWarning):
    """Issued when a correlation is evaluated outside its validity range."""

    pass
