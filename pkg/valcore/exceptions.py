class ValuationError(Exception):
    """Base class for every error raised by the subval apps."""


class UsageError(ValuationError):
    """An operation was called outside its precondition."""


class SizeLimitError(ValuationError):
    """The requested good count is beyond what a dense table or brute force can hold."""


class ValueOverflowError(ValuationError):
    """A value read from outside does not fit in 64 bits."""


class NonIntegerError(ValuationError):
    """An integer-only routine received a fractional value."""


class ConditionError(ValuationError):
    """A mathematical precondition failed; ``witness`` names where."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
