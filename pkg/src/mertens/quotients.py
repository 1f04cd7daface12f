"""Successive quotients ``y // n`` for consecutive denominators.

Once ``n >= cbrt(2*y)`` the second difference of ``y/n`` is at most one, so
each new quotient can be recovered from the previous one and its remainder
with a couple of additions.  Below that threshold every quotient goes
through a precomputed :class:`~mertens.magic.MagicDivisor`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mertens.magic import MagicDivisor, magic_div, magic_make


def icbrt_ceil(v: int) -> int:
    """Smallest ``k >= 0`` with ``k**3 >= v``."""
    if v <= 0:
        return 0
    k = int(round(v ** (1.0 / 3.0)))
    while k**3 < v:
        k += 1
    while k > 0 and (k - 1) ** 3 >= v:
        k -= 1
    return k


@dataclass
class DivisionCounter:
    true_divisions: int = 0
    magic_divisions: int = 0
    steps: int = 0
    skipped: int = 0


@dataclass
class QuotientCursor:
    """State ``q == y // n`` and ``r == y - q*n`` that moves by one denominator."""

    y: int
    n: int
    q: int = 0
    r: int = 0
    delta: int = 0
    counter: DivisionCounter = field(default_factory=DivisionCounter)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("denominator must be positive")
        self.q, self.r = divmod(self.y, self.n)
        self.counter.true_divisions += 1

    def forward(self) -> int:
        """Move to ``n + 1`` and return the new quotient."""
        n1 = self.n + 1
        d = self.delta
        r = self.r - self.q + d * n1
        while r < 0:
            d += 1
            r += n1
        while r >= n1:
            d -= 1
            r -= n1
        self.q -= d
        self.r = r
        self.delta = d
        self.n = n1
        self.counter.steps += 1
        return self.q

    def backward(self) -> int:
        """Move to ``n - 1`` and return the new quotient."""
        n1 = self.n - 1
        if n1 < 1:
            raise ValueError("cannot step below denominator 1")
        d = self.delta
        r = self.r + self.q - d * n1
        while r < 0:
            d -= 1
            r += n1
        while r >= n1:
            d += 1
            r -= n1
        self.q += d
        self.r = r
        self.delta = d
        self.n = n1
        self.counter.steps += 1
        return self.q


def quotient_walk(y: int, n_lo: int, n_hi: int, counter: DivisionCounter | None = None,
                  magic: dict[int, MagicDivisor] | None = None):
    """Yield ``y // n`` for ``n_lo <= n <= n_hi``.

    Denominators below ``cbrt(2y)`` use magic constants (taken from ``magic`` or
    built on demand, which costs one true division each); the rest are walked.
    """
    if counter is None:
        counter = DivisionCounter()
    if n_lo < 1:
        raise ValueError("denominators start at 1")
    kc = icbrt_ceil(2 * y)
    n = n_lo
    while n <= n_hi and n < kc:
        if n == 1:
            yield y
        else:
            md = magic.get(n) if magic is not None else None
            if md is None:
                md = magic_make(n)
                counter.true_divisions += 1
                if magic is not None:
                    magic[n] = md
            counter.magic_divisions += 1
            yield magic_div(md, y)
        n += 1
    if n <= n_hi:
        cur = QuotientCursor(y, n, counter=counter)
        yield cur.q
        while cur.n < n_hi:
            yield cur.forward()
