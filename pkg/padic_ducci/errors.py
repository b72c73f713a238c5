"""Exception hierarchy shared by the library and the command line."""

from typing import Optional

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_IO = 3


class DucciError(Exception):
    """Base class for every error raised by padic_ducci"""

    exit_code = EXIT_VALIDATION

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.field = field

    def diagnostic(self) -> str:
        """One-line message for the command line"""
        if self.field:
            return f"error: {self.message} (field: {self.field})"
        return f"error: {self.message}"


class ValidationError(DucciError):
    exit_code = EXIT_VALIDATION


class MalformedRationalError(ValidationError):
    pass


class InvalidPrimeError(ValidationError):
    pass


class DimensionMismatchError(ValidationError):
    pass


class SchemaError(ValidationError):
    pass


class NonMonicPolynomialError(ValidationError):
    pass


class ZeroPolynomialError(ValidationError):
    pass


class InstanceMismatchError(ValidationError):
    pass


class ReportIOError(DucciError):
    exit_code = EXIT_IO
