"""Mobius and Mertens function computations.

Exact ``M(x)`` by a segmented byte sieve or by a combinatorial formula,
explicit-formula approximations built on zeta zeros, and lattice searches
for large values of ``M(x)/sqrt(x)``.
"""

from mertens._backend import BACKEND
from mertens.errors import (
    CheckpointError,
    IntegrityError,
    MertensError,
    OutOfRangeError,
    PrecisionError,
    PreconditionError,
    ProviderGapError,
    StructureError,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CheckpointError",
    "IntegrityError",
    "MertensError",
    "OutOfRangeError",
    "PrecisionError",
    "PreconditionError",
    "ProviderGapError",
    "StructureError",
    "__version__",
]
