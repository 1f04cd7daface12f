"""Statistics of the zeros of M(n): counts, sign fractions and gap bands."""

from __future__ import annotations

import bisect
import csv
import io
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import isqrt, prod

import numpy as np
import sympy

from mertens.errors import IntegrityError, OutOfRangeError, PreconditionError


@dataclass
class ZeroList:
    """Strictly increasing ``n`` with ``M(n) = 0``, complete up to ``limit``."""

    values: np.ndarray
    limit: int
    final_M: int | None = None  # M(limit), fixes the sign after the last zero

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.int64)
        v = self.values
        if len(v) and (v[0] < 2 or np.any(np.diff(v) <= 0)):
            raise IntegrityError("zeros must be strictly increasing and start at n >= 2")
        if len(v) and v[-1] > self.limit:
            raise IntegrityError(f"zero {v[-1]} beyond source limit {self.limit}")

    def __len__(self):
        return len(self.values)

    @classmethod
    def from_stats(cls, stats) -> "ZeroList":
        return cls(np.array(stats.zeros, dtype=np.int64), stats.n_last, stats.M_last)

    @classmethod
    def from_events(cls, path, limit: int | None = None) -> "ZeroList":
        from mertens.checkpoint import read_events
        zs, last_n, last_M = [], 0, None
        for kind, n, M in read_events(path):
            if kind == "zero":
                zs.append(n)
            if n >= last_n:
                last_n, last_M = n, (0 if kind == "zero" else M)
        # the last event after the last zero carries the sign of the tail
        return cls(np.array(zs, dtype=np.int64), limit if limit is not None else last_n,
                   last_M or None)

    def _check(self, x):
        if x > self.limit + 1:
            raise OutOfRangeError(f"x={x} beyond the zero list's source limit {self.limit}")


def count_zeros(zeros: ZeroList, x: int) -> int:
    """``V(x)``: zeros strictly below ``x``."""
    zeros._check(x)
    return int(np.searchsorted(zeros.values, x, side="left"))


def mu_at(ns) -> np.ndarray:
    """``mu(n)`` by factoring each ``n`` (independent of the sieve)."""
    return np.array([int(sympy.mobius(int(n))) for n in ns], dtype=np.int8)


def positivity(zeros: ZeroList, mu_zeros, x: int) -> Fraction:
    """``M_+(x)``: the fraction of ``n <= x`` with ``M(n) > 0``.

    Between consecutive zeros ``z' < z`` with ``z - z' > 1``, ``M`` keeps one
    sign and ``M(z - 1) = -mu(z)``.  After the last listed zero the sign comes
    from ``zeros.final_M``.
    """
    if x < 1:
        raise PreconditionError("x must be >= 1")
    zeros._check(x - 1 if x == zeros.limit + 1 else x)
    v = zeros.values
    mz = np.asarray(mu_zeros, dtype=np.int64)
    if len(mz) != len(v):
        raise PreconditionError("need mu at every zero")
    j = int(np.searchsorted(v, x, side="right"))  # zeros <= x
    starts = np.concatenate([[0], v[:j]])  # interval (start, end)
    ends = np.concatenate([v[:j], [x + 1]])
    lengths = ends - starts - 1
    signs = np.empty(j + 1, dtype=np.int64)
    signs[:j] = -mz[:j]
    if j < len(v):
        signs[j] = -mz[j]
    else:
        if zeros.final_M is None:
            raise PreconditionError("sign after the last zero unknown; pass final_M")
        signs[j] = int(np.sign(zeros.final_M))
    pos = int(lengths[(signs > 0) & (lengths > 0)].sum())
    return Fraction(pos, x)


@dataclass
class GapHistogram:
    counts: dict
    m: int

    def __post_init__(self):
        if sum(self.counts.values()) != max(self.m - 1, 0):
            raise IntegrityError("gap counts must sum to m - 1")


def gap_histogram(zeros: ZeroList, m: int) -> GapHistogram:
    """Gaps between consecutive zeros among the first ``m``."""
    if m > len(zeros):
        raise PreconditionError(f"m={m} exceeds the {len(zeros)} zeros available")
    if m < 2:
        return GapHistogram({}, m)
    g = np.diff(zeros.values[:m])
    keys, cnt = np.unique(g, return_counts=True)
    return GapHistogram(dict(zip(keys.tolist(), cnt.tolist())), m)


def band_primes(g: int) -> list[int]:
    """``P_g``: primes ``p`` with ``p*p <= g`` and ``g = 1 (mod p*p)``."""
    if g < 1:
        raise PreconditionError("g must be >= 1")
    return [p for p in sympy.primerange(2, isqrt(g) + 1) if g % (p * p) == 1]


def band_multiplier(g: int) -> Fraction:
    """Sum over subsets ``S`` of ``P_g`` of ``prod_{p in S} 1/(p^2 - 2)``."""
    P = band_primes(g)
    total = Fraction(0)
    for r in range(len(P) + 1):
        for S in combinations(P, r):
            total += Fraction(1, prod(p * p - 2 for p in S))
    assert total == prod((Fraction(p * p - 1, p * p - 2) for p in P), start=Fraction(1))
    return total


def band_classes(g_max: int) -> dict[int, tuple]:
    """``g -> P_g`` for all ``g <= g_max`` by sieving over ``p*p``."""
    out = {g: [] for g in range(1, g_max + 1)}
    for p in sympy.primerange(2, isqrt(g_max) + 1):
        q = p * p
        for g in range(q + 1, g_max + 1, q):
            out[g].append(p)
    return {g: tuple(v) for g, v in out.items()}


@dataclass
class BandReport:
    mean_ratio: float
    used: list  # (g, G(g), baseline, ratio)
    band: tuple
    passed: bool


def band_ratio(hist: GapHistogram, band=(1.3, 1.7), min_count: int = 50, g_max: int | None = None,
               target=(2,)) -> BandReport:
    """Mean of ``G(g) / b(g)`` over ``g`` with ``P_g = target``.

    ``b(g)`` is the geometric mean of ``G(g-1)`` and ``G(g+1)``, used only when
    both neighbours have ``P = {}`` and all three counts reach ``min_count``.
    """
    c = hist.counts
    used = []
    for g in sorted(c):
        if g < 2 or (g_max is not None and g > g_max) or c[g] < min_count:
            continue
        a, b, x = c.get(g - 1, 0), c.get(g + 1, 0), c[g]
        if min(a, b) < min_count:
            continue
        if tuple(band_primes(g)) != tuple(target) or band_primes(g - 1) or band_primes(g + 1):
            continue
        base = (a * b) ** 0.5
        used.append((g, x, base, x / base))
    mean = float(np.mean([u[3] for u in used])) if used else float("nan")
    return BandReport(mean, used, tuple(band), bool(used) and band[0] <= mean <= band[1])


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def vcount_csv(zeros: ZeroList, xs) -> str:
    return _csv(["x", "V"], [(x, count_zeros(zeros, x)) for x in xs])


def positivity_csv(zeros: ZeroList, mu_zeros, xs) -> str:
    rows = []
    for x in xs:
        f = positivity(zeros, mu_zeros, x)
        rows.append((x, f.numerator, f.denominator, f"{float(f):.8f}"))
    return _csv(["x", "num", "den", "M_plus"], rows)


def gaps_csv(hist: GapHistogram) -> str:
    rows = []
    for g in sorted(hist.counts):
        P = band_primes(g)
        rows.append((g, hist.counts[g], " ".join(map(str, P)), str(band_multiplier(g))))
    return _csv(["g", "count", "P_g", "multiplier"], rows)


def sign_series(zeros: ZeroList, mu_zeros, x: int) -> np.ndarray:
    """``sign(M(n))`` for ``1 <= n <= x`` rebuilt from the zero list (index 0 is n = 1)."""
    v = zeros.values
    mz = np.asarray(mu_zeros, dtype=np.int64)
    out = np.zeros(x, dtype=np.int8)
    prev = 0
    j = bisect.bisect_right(v.tolist(), x)
    for i in range(j):
        z = int(v[i])
        out[prev:z - 1] = -mz[i]  # n in (prev, z)
        prev = z
    if prev < x:
        if j < len(v):
            out[prev:] = -mz[j]
        elif zeros.final_M is not None:
            out[prev:] = int(np.sign(zeros.final_M))
        else:
            raise PreconditionError("sign after the last zero unknown; pass final_M")
    return out
