"""Exception types shared across the library.

Everything user-facing derives from ``ValidationError`` so the CLI can map
bad input to a single exit code; I/O failures use the builtin ``OSError``.
"""


class IdrError(Exception):
    """Base class for all library errors."""


class ValidationError(IdrError, ValueError):
    """Bad input: shapes, ranges, or malformed configuration."""


class DimensionMismatch(ValidationError):
    pass


class NonFiniteInput(ValidationError):
    pass


class NonPositiveAlpha(ValidationError):
    pass


class InvalidK(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class InvalidSpec(ValidationError):
    pass


class InvalidFraction(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class InvalidConfig(ValidationError):
    pass
