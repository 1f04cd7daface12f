"""Integer lattice reduction for the y-search.

Reduction runs on exact integers with the fraction-free Gram-Schmidt data of
the integral LLL algorithm (``d_i`` are leading Gram minors, ``lam[i][j]``
are ``d_{j+1} * mu_ij``), so the output is deterministic and independent of
floating point.  :func:`check_lll` recomputes everything from scratch and
verifies both conditions exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mertens.errors import PreconditionError, StructureError


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


def _gso_integral(B):
    """Fraction-free Gram-Schmidt: ``(d, lam)`` with ``d[0] = 1``."""
    n = len(B)
    d = [1] + [0] * n
    lam = [[0] * n for _ in range(n)]
    for k in range(n):
        for j in range(k + 1):
            u = _dot(B[k], B[j])
            for i in range(j):
                u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise PreconditionError("basis vectors are linearly dependent")
                d[k + 1] = u
    return d, lam


def lll_reduce(basis, delta=Fraction(99, 100), eta=Fraction(501, 1000)):
    """LLL-reduce integer row vectors.  Returns a new list of lists.

    ``eta`` bounds ``|mu_ij|`` after size reduction (must be in [1/2, 1));
    ``delta`` is the Lovasz constant in (1/4, 1].
    """
    delta, eta = _frac(delta), _frac(eta)
    if not Fraction(1, 4) < delta <= 1:
        raise PreconditionError("delta must lie in (1/4, 1]")
    if not Fraction(1, 2) <= eta < 1:
        raise PreconditionError("eta must lie in [1/2, 1)")
    B = [list(map(int, v)) for v in basis]
    n = len(B)
    if n == 0:
        return B
    d, lam = _gso_integral(B)
    dn, dd = delta.numerator, delta.denominator
    en, ed = eta.numerator, eta.denominator

    def size_reduce(k, l):
        # |lam[k][l]| <= eta * d[l+1]
        dl = d[l + 1]
        if ed * abs(lam[k][l]) <= en * dl:
            return
        q = (2 * lam[k][l] + dl) // (2 * dl)
        bk, bl = B[k], B[l]
        for t in range(len(bk)):
            bk[t] -= q * bl[t]
        lam[k][l] -= q * dl
        lk, ll = lam[k], lam[l]
        for i in range(l):
            lk[i] -= q * ll[i]

    def swap(k):
        B[k], B[k - 1] = B[k - 1], B[k]
        lk, lk1 = lam[k], lam[k - 1]
        for j in range(k - 1):
            lk[j], lk1[j] = lk1[j], lk[j]
        lm = lam[k][k - 1]
        bb = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, n):
            li = lam[i]
            t = li[k]
            li[k] = (d[k + 1] * li[k - 1] - lm * t) // d[k]
            li[k - 1] = (bb * t + lm * li[k]) // d[k + 1]
        d[k] = bb

    k = 1
    while k < n:
        size_reduce(k, k - 1)
        lm = lam[k][k - 1]
        # Lovasz: d_{k+1} d_{k-1} + lam^2 >= delta d_k^2
        if dd * (d[k + 1] * d[k - 1] + lm * lm) < dn * d[k] * d[k]:
            swap(k)
            k = max(k - 1, 1)
        else:
            for l in range(k - 2, -1, -1):
                size_reduce(k, l)
            k += 1
    return B


@dataclass
class LLLCheck:
    size_reduced: bool
    lovasz: bool
    worst_mu: Fraction
    worst_lovasz: Fraction

    @property
    def ok(self) -> bool:
        return self.size_reduced and self.lovasz


def check_lll(basis, delta=Fraction(99, 100), eta=Fraction(501, 1000)) -> LLLCheck:
    """Exact re-verification of size reduction and the Lovasz condition."""
    delta, eta = _frac(delta), _frac(eta)
    B = [list(map(int, v)) for v in basis]
    d, lam = _gso_integral(B)
    n = len(B)
    worst_mu = Fraction(0)
    for i in range(n):
        for j in range(i):
            worst_mu = max(worst_mu, Fraction(abs(lam[i][j]), d[j + 1]))
    worst_lov = Fraction(10**9)
    for k in range(1, n):
        lhs = Fraction(d[k + 1] * d[k - 1] + lam[k][k - 1] ** 2, d[k] * d[k])
        worst_lov = min(worst_lov, lhs - delta)
    return LLLCheck(worst_mu <= eta, n < 2 or worst_lov >= 0, worst_mu, worst_lov)


def det_abs_squared(basis) -> int:
    """``det(B B^T)``, the squared covolume, exactly."""
    d, _ = _gso_integral([list(map(int, v)) for v in basis])
    return d[len(basis)]
