"""An alternative isolated-value identity built on a mod 6 step function.

With ``h`` the period-6 function below and ``f(n) = h(n-1) - h(n)``, the
summatory identity ``sum_{n<=y} f(n) M(y/n) = -3`` (for ``y >= 3``) plays the
role that ``sum_{n<=y} M(y/n) = 1`` plays for :mod:`mertens.combinatorial`,
and the outer weights become the Dirichlet inverse ``f^-1`` instead of mu.

The published form of the identity has an undefined index in its last sum
and, read literally, does not reproduce M(x).  ``benito_varona_M`` therefore
takes an ``interpretation`` and reports mismatches as data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from mertens.combinatorial import default_u, nu_kappa
from mertens.errors import PreconditionError
from mertens.sieve import mobius_block

H = (2, 0, 0, 1, 1, -1)
F = (-3, 2, 0, -1, 0, 2)  # f(n) by n mod 6
INTERPRETATIONS = ("derived", "literal")
MAX_DESK_X = 10**5


def h(n: int) -> int:
    return H[n % 6]


def f(n: int) -> int:
    return F[n % 6]


def h_floor_form(m: int) -> int:
    """``3*floor(m/3) - 2*floor((m-1)/2)``, equal to ``h(m)`` for ``m >= 1``."""
    return 3 * (m // 3) - 2 * ((m - 1) // 2)


@dataclass
class DirichletInverseTable:
    """``f^-1(n) = scaled[n] / 2**shift`` exactly."""

    scaled: np.ndarray
    shift: int

    @property
    def limit(self) -> int:
        return len(self.scaled) - 1

    def __getitem__(self, n: int) -> Fraction:
        return Fraction(int(self.scaled[n]), 1 << self.shift)

    def zero_fraction(self) -> float:
        return float(np.count_nonzero(self.scaled[1:] == 0)) / self.limit


def dirichlet_inverse_f(limit: int) -> DirichletInverseTable:
    """Exact ``f^-1(n)`` for ``n <= limit``.

    Every step of the recursion divides by ``f(1) = 2`` once and there are at
    most ``log2(n)`` steps, so scaling by ``2**(bitlen(limit))`` keeps all
    values integral.  The halving is asserted to be exact.
    """
    if limit < 1:
        raise PreconditionError("limit must be >= 1")
    K = limit.bit_length()
    n = np.arange(limit + 1)
    fm = np.asarray(F, dtype=np.int64)[n % 6]
    fm[0] = 0
    out = np.zeros(limit + 1, dtype=np.int64)
    acc = np.zeros(limit + 1, dtype=np.int64)
    out[1] = 1 << (K - 1)  # 1/2
    bound = 1 << 62
    for d in range(1, limit + 1):
        if d > 1:
            a = int(acc[d])
            if a & 1:
                raise ArithmeticError(f"f^-1({d}) is not a multiple of 2**-{K}")
            out[d] = -(a >> 1)
        v = int(out[d])
        top = limit // d
        if v and top >= 2:
            if abs(v) * 3 * top >= bound:
                raise OverflowError("f^-1 table exceeds 64-bit range")
            acc[2 * d::d] += fm[2:top + 1] * v
    return DirichletInverseTable(out, K)


def bv_T(y: int, u: int, mu, M, interpretation: str = "derived") -> int:
    """The bracketed inner term for one ``y`` (tables indexed by n)."""
    nu, kap = nu_kappa(y)
    mid = sum((h(k) - h(k - 1)) * int(M[y // k]) for k in range(y // u + 1, kap + 1))
    tail = sum(h(y // k) * int(mu[k]) for k in range(1, nu + 1) if mu[k])
    if interpretation == "derived":
        return -3 + mid - h(kap) * int(M[nu]) + tail
    if interpretation == "literal":
        return -3 + mid + h(nu) * int(M[kap]) + tail
    raise PreconditionError(f"interpretation must be one of {INTERPRETATIONS}")


@dataclass
class BVReport:
    x: int
    u: int
    interpretation: str
    got: Fraction
    expected: int

    @property
    def matches(self) -> bool:
        return self.got == self.expected


def _tables(x: int):
    mu = np.concatenate([[0], mobius_block(1, x)]).astype(np.int64)
    return mu, np.cumsum(mu)


def benito_varona_M(x: int, u: int | None = None, interpretation: str = "derived", *,
                    finv: DirichletInverseTable | None = None, tables=None) -> BVReport:
    """Evaluate ``M(x)`` through ``f^-1`` and compare with the sieve.

    ``derived`` uses ``-h(kappa) M(nu)`` and weight 1; ``literal`` is the
    published text with ``+h(nu) M(kappa)`` and weight 1/2.  In both the
    undefined index of the last sum is taken as the summation variable,
    which turns that sum into ``sum h(y // n) mu(n)``.
    """
    if interpretation not in INTERPRETATIONS:
        raise PreconditionError(f"interpretation must be one of {INTERPRETATIONS}")
    if not 3 <= x <= MAX_DESK_X:
        raise PreconditionError(f"x must lie in [3, {MAX_DESK_X}]")
    if u is None:
        u = min(default_u(x), x - 1)
    if not isqrt(x) < u < x:
        raise PreconditionError(f"u={u} must satisfy isqrt(x) < u < x")
    if finv is None or finv.limit < x // u:
        finv = dirichlet_inverse_f(max(x // u, 1))
    mu, M = tables if tables is not None else _tables(x)
    total = Fraction(0)
    for n in range(1, x // u + 1):
        w = finv[n]
        if w:
            total += w * bv_T(x // n, u, mu, M, interpretation)
    if interpretation == "literal":
        total /= 2
    return BVReport(x, u, interpretation, total, int(M[x]))


def benito_varona_sweep(xs, interpretation: str = "derived", u_of=None) -> list[BVReport]:
    """Mismatching reports over ``xs`` (empty list means the identity held everywhere)."""
    xs = sorted(set(int(v) for v in xs))
    top = xs[-1]
    tables = _tables(top)
    finv = dirichlet_inverse_f(top)
    bad = []
    for x in xs:
        u = u_of(x) if u_of is not None else None
        r = benito_varona_M(x, u, interpretation, finv=finv, tables=tables)
        if not r.matches:
            bad.append(r)
    return bad


__all__ = [
    "BVReport",
    "DirichletInverseTable",
    "benito_varona_M",
    "benito_varona_sweep",
    "dirichlet_inverse_f",
    "f",
    "h",
    "h_floor_form",
]
