"""Exception types raised across the package."""


class NaimarkError(Exception):
    """Base class for all package errors."""


class ShapeError(NaimarkError, ValueError):
    pass


class PreconditionError(NaimarkError, ValueError):
    pass


class MetricDegenerateError(NaimarkError):
    """The Gram metric is singular or too badly conditioned to invert."""


class SpanDeficientError(NaimarkError):
    """A target observable is not in the real span of the family."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class NullEventError(NaimarkError):
    """Conditioning on an event of (numerically) zero probability."""


class POVMValidationError(NaimarkError, ValueError):
    """An operator family failed POVM validation.

    ``offending`` lists ``(index, reason)`` pairs.
    """

    def __init__(self, message, offending=()):
        super().__init__(message)
        self.offending = list(offending)


class FormatError(NaimarkError, ValueError):
    """A file does not match the documented schema."""
