"""Exception hierarchy shared by all modules.

Validation-type errors (bad input data, bad config, bad sizes) derive from
``ValidationError`` so the CLI can map them to exit status 1; numeric
failures map to exit status 2.
"""


class HydrogranError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(HydrogranError, ValueError):
    """Input violates a documented invariant."""

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class SchemaError(ValidationError):
    """CSV header does not match the expected columns."""

    def __init__(self, message, column=None):
        self.column = column
        super().__init__(message)


class ParseError(ValidationError):
    """A cell could not be parsed as a number."""


class SizeError(ValidationError):
    """Dimension or count mismatch."""


class CapacityError(ValidationError):
    """Problem exceeds the bound of an exhaustive algorithm."""


class DomainError(ValidationError):
    """Argument outside the mathematical domain of a function."""


class ConfigError(ValidationError):
    """Unknown or malformed configuration key."""


class NumericError(HydrogranError, ArithmeticError):
    """Non-finite value or singular system during computation."""
