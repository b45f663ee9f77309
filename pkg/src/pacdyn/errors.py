"""Exception hierarchy shared across the package."""


class PacdynError(Exception):
    """Base class for all package errors."""


class InvalidGridError(PacdynError):
    """Grid construction rejected (e.g. too few cells per side)."""


class DimensionMismatchError(PacdynError):
    """An array argument has the wrong shape or length for the grid."""


class ConfigError(PacdynError):
    """A run configuration document is malformed or out of range.

    ``path`` is a dotted key path into the JSON document ("" for
    document-level problems) so messages can name the offending key.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class StepSolveError(PacdynError):
    """The implicit step's linear solve failed to converge."""

    def __init__(self, message: str, stats=None):
        self.stats = stats
        super().__init__(message)


class MetricUndefinedError(PacdynError):
    """An interface metric was requested for a field with no zero level set."""
