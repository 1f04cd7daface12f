"""Isolated values of M(x) in about x**(2/3) operations.

For ``isqrt(x) < u < x``::

    M(x) = sum_{n <= x/u, n squarefree} mu(n) * S(x // n, u)
    S(y, u) = 1 - sum_{y/u < k <= kappa_y} M(y // k)
                + kappa_y * M(nu_y) - sum_{k <= nu_y} (y // k) * mu(k)

with ``nu_y = isqrt(y)`` and ``kappa_y = y // (nu_y + 1)``.  Only mu and M
below ``u`` are needed.  They come from one segmented sieve pass; every M
block is handed to all pending ``S`` accumulators before it is dropped.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import ceil, isqrt

import numpy as np

from mertens import _backend
from mertens.errors import OutOfRangeError, PreconditionError, ProviderGapError
from mertens.magic import magic_table
from mertens.quotients import DivisionCounter, icbrt_ceil, quotient_walk
from mertens.sieve import iter_mobius_blocks, log_table, mobius_block

# keeps sum |mu(k)| * (y // k) and the M sums inside int64
MAX_X = 1 << 57
MAX_BLOCK = 1 << 22


def nu_kappa(y: int) -> tuple[int, int]:
    nu = isqrt(y)
    return nu, y // (nu + 1)


def default_u(x: int) -> int:
    """``ceil(x**(2/3) / 2)``, pushed above ``isqrt(x)`` when that is too small."""
    c = icbrt_ceil(x * x)
    return max(-(-c // 2), isqrt(x) + 1)


def default_block(u: int) -> int:
    return max(1024, min(ceil(96 * (2 * u) ** 0.5), MAX_BLOCK))


@dataclass
class IsolatedQuery:
    x: int
    u: int | None = None
    sieve_block: int | None = None

    def __post_init__(self):
        if self.x < 1:
            raise PreconditionError("x must be >= 1")
        if self.x >= MAX_X:
            raise OutOfRangeError(f"x must be below 2**57 for 64-bit accumulation, got {self.x}")
        if self.u is None:
            self.u = default_u(self.x)
        elif not isqrt(self.x) < self.u < self.x:
            raise PreconditionError(
                f"u={self.u} must satisfy isqrt(x)={isqrt(self.x)} < u < x={self.x}")
        if self.sieve_block is None:
            self.sieve_block = default_block(self.u)
        elif self.sieve_block < 1:
            raise PreconditionError("sieve_block must be positive")

    @property
    def direct(self) -> bool:
        """True when the formula does not apply and a plain sieve to x is used."""
        return self.u >= self.x


@dataclass
class IsolatedResult:
    x: int
    M: int
    u: int
    seconds: float
    nested: dict[int, int] = field(default_factory=dict)
    counters: dict[str, int] = field(default_factory=dict)


def _squarefree_n(mu: np.ndarray, hi: int) -> np.ndarray:
    n = np.arange(1, hi + 1, dtype=np.int64)
    return n[mu[1:hi + 1] != 0]


def mertens_isolated(q: IsolatedQuery | int, *, nested: bool = False,
                     kernels=None) -> IsolatedResult:
    """Exact ``M(x)``.  With ``nested=True`` also ``M(x // 128)`` from the same pass."""
    if not isinstance(q, IsolatedQuery):
        q = IsolatedQuery(int(q))
    k = kernels or _backend.kernels
    t0 = time.perf_counter()
    x, u = q.x, q.u
    targets = [x] + ([x // 128] if nested and x // 128 >= 1 else [])
    if q.direct:
        from mertens.sieve import mertens_values
        vals = mertens_values(targets, kernels=k)
        return IsolatedResult(x, vals[x], u, time.perf_counter() - t0,
                              {t: vals[t] for t in targets[1:]}, {})

    nu_x = isqrt(x)
    # every formula target t needs isqrt(t) < u < t; targets at or below u are read off the stream
    formula = [t for t in targets if t > u]
    streamed = sorted(t for t in targets if t <= u)
    small_len = nu_x + 1
    n_max = x // u
    mu_small = mobius_block(1, max(small_len - 1, n_max), kernels=k)
    mu_small = np.concatenate([np.zeros(1, dtype=np.int8), mu_small])
    M_small = np.cumsum(mu_small, dtype=np.int64)

    groups = []
    for t in formula:
        ns = _squarefree_n(mu_small, t // u)
        groups.append((t, ns, t // ns))
    ys = np.concatenate([g[2] for g in groups])
    K = icbrt_ceil(2 * x) + 1
    mmul, madd, mshift = magic_table(np.arange(K, dtype=np.int64))
    counters = np.zeros(4, dtype=np.int64)
    st = k.s_cursor_init(ys, u, counters)

    found: dict[int, int] = {}
    logs = log_table(isqrt(u) + 1)
    M = 0
    si = 0
    for start, mu in iter_mobius_blocks(1, u, q.sieve_block, logs=logs, kernels=k):
        Mb = M + np.cumsum(mu, dtype=np.int64)
        k.s_block(st, Mb, start, mmul, madd, mshift, counters)
        end = start + len(mu) - 1
        while si < len(streamed) and streamed[si] <= end:
            found[streamed[si]] = int(Mb[streamed[si] - start])
            si += 1
        M = int(Mb[-1])
    msum = k.s_finish(st)
    T = k.s_small(ys, mu_small, M_small, mmul, madd, mshift, counters)
    S = T - msum

    off = 0
    for t, ns, tys in groups:
        s = S[off:off + len(ns)]
        off += len(ns)
        found[t] = int((mu_small[ns].astype(np.int64) * s).sum())
    names = ("true_divisions", "products", "skipped", "steps")
    return IsolatedResult(x, found[x], u, time.perf_counter() - t0,
                          {t: found[t] for t in targets[1:]},
                          dict(zip(names, counters.tolist())) | {"ys": len(ys)})


def compute_S(y: int, u: int, mu, M, counter: DivisionCounter | None = None) -> int:
    """``S(y, u)`` from tables with ``mu[n] = mu(n)`` and ``M[m] = M(m)``.

    Index 0 of both tables is ignored.  Raises :class:`ProviderGapError` when
    a table is too short for this ``y``.
    """
    if y < 1 or u < 1:
        raise PreconditionError("y and u must be positive")
    if counter is None:
        counter = DivisionCounter()
    nu, kap = nu_kappa(y)
    kstop = y // u
    need_M = max(nu, y // (kstop + 1)) if kap > kstop else nu
    if len(mu) <= nu:
        raise ProviderGapError(f"mu needed for n <= {nu}, table ends at {len(mu) - 1}")
    if len(M) <= need_M:
        raise ProviderGapError(f"M needed for m <= {need_M}, table ends at {len(M) - 1}")
    total = 1 + kap * int(M[nu])
    if kap > kstop:
        for qv in quotient_walk(y, kstop + 1, kap, counter):
            total -= int(M[qv])
    kc = min(icbrt_ceil(2 * y), nu + 1)
    for kk in range(1, kc):
        m = int(mu[kk])
        if m == 0:
            counter.skipped += 1
            continue
        total -= m * next(quotient_walk(y, kk, kk, counter))
    if kc <= nu:
        for j, qv in enumerate(quotient_walk(y, kc, nu, counter), kc):
            total -= int(mu[j]) * qv
    return total
