"""Exception types shared across the toolkit.

Every error raised on a documented contract derives from TubepulseError so
callers (CLI, server) can map domain failures to exit codes / HTTP statuses
without catching bare Exception.
"""


class TubepulseError(Exception):
    """Base class for all domain errors."""


class FormatError(TubepulseError):
    """Malformed input text (timestamps, embedding files, CSV cells)."""


class SchemaError(TubepulseError):
    """Input file is missing a required column or header."""


class OrderingError(TubepulseError):
    """A pair of instants violates the required ordering (as-of < publish)."""


class ShapeError(TubepulseError):
    """Array dimensions do not line up."""


class DegenerateSeriesError(TubepulseError):
    """A statistic is undefined for the given series (zero variance, zero vector)."""


class ParameterError(TubepulseError):
    """A parameter is outside its documented domain."""


class EmptyDatasetError(TubepulseError):
    """An operation that needs rows received none."""


class InsufficientDataError(TubepulseError):
    """Fewer rows than the operation's stated minimum."""


class ProfileMismatchError(TubepulseError):
    """Feature profile of the input does not match the model's profile."""


class ModelLoadError(TubepulseError):
    """Model file is corrupt, truncated, or of an unsupported format version."""
