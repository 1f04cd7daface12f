class MertensError(Exception):
    """Base class for errors raised by this package."""


class PreconditionError(MertensError, ValueError):
    """An argument violates an operation's precondition."""


class OutOfRangeError(PreconditionError):
    """Input lies outside the range where the method is proven correct."""


class IntegrityError(MertensError):
    """Stored data is malformed, truncated or inconsistent."""


class CheckpointError(IntegrityError):
    """A checkpoint cannot be used to resume this run."""


class ProviderGapError(PreconditionError):
    """A table of mu or M values does not cover the range a formula needs."""


class PrecisionError(MertensError):
    """Not enough digits in the inputs for the requested evaluation."""


class StructureError(MertensError):
    """A reduced lattice basis does not have the expected shape."""
