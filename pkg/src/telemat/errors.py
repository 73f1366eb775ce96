"""Exception types shared across the package."""


class TelematError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(TelematError, ValueError):
    """Operands live on incompatible spaces."""


class DegenerateStateError(TelematError, ValueError):
    """A zero vector or zero matrix where a nonzero one is required."""


class InvalidPartitionError(TelematError, ValueError):
    """A bipartition does not cover the particle slots exactly once."""


class BasisValidationError(TelematError, ValueError):
    """A measurement basis fails orthonormality or shape requirements."""


class StateFormatError(TelematError, ValueError):
    """A state or basis document is malformed.

    ``location`` identifies the offending field, e.g. ``amplitudes[3].index``.
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class UsageError(TelematError, ValueError):
    """Bad command-line arguments or inconsistent option combinations."""
