"""Division by an invariant integer via multiply-add-shift.

A divisor ``d`` is turned into three constants so that for every
``0 <= n < 2**64``::

    n // d == ((n * mul + add) >> 64) >> shift

which is one 128-bit multiply, one addition and two shifts.  Building the
constants costs exactly one true division.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

U64 = (1 << 64) - 1
MAX_DIVIDEND = U64


@dataclass(frozen=True)
class MagicDivisor:
    d: int
    mul: int
    add: int
    shift: int

    def __call__(self, n: int) -> int:
        return magic_div(self, n)


def magic_make(d: int) -> MagicDivisor:
    """Precompute the constants for dividing by ``d`` (``2 <= d < 2**63``)."""
    d = int(d)
    if not 2 <= d < (1 << 63):
        raise ValueError(f"divisor out of range [2, 2**63): {d}")
    s = d.bit_length() - 1
    if d & (d - 1) == 0:
        # (n + 1) * (2**64 - 1) >> 64 == n for every 64-bit n
        return MagicDivisor(d, U64, U64, s)
    m, e = divmod(1 << (64 + s), d)
    if d - e <= (1 << s):
        # round-up constant is exact on the whole 64-bit range
        return MagicDivisor(d, m + 1, 0, s)
    # round-down constant with an increment: (n + 1) * m
    return MagicDivisor(d, m, m, s)


def magic_div(md: MagicDivisor, n: int) -> int:
    if not 0 <= n <= MAX_DIVIDEND:
        raise ValueError(f"dividend outside [0, 2**64): {n}")
    return ((n * md.mul + md.add) >> 64) >> md.shift


def magic_table(divisors) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Constants for many divisors as ``(mul, add, shift)`` uint64/uint8 arrays.

    Entries for divisors below 2 are left as zeros; kernels special-case them.
    """
    divisors = np.asarray(divisors, dtype=np.int64)
    mul = np.zeros(len(divisors), dtype=np.uint64)
    add = np.zeros(len(divisors), dtype=np.uint64)
    shift = np.zeros(len(divisors), dtype=np.uint8)
    for i, d in enumerate(divisors.tolist()):
        if d >= 2:
            md = magic_make(d)
            mul[i] = md.mul
            add[i] = md.add
            shift[i] = md.shift
    return mul, add, shift
