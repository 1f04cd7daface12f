import random
import time
from math import isqrt

import numpy as np
import pytest

from conftest import mertens_table, mu_table
from mertens import _backend
from mertens.combinatorial import (
    MAX_X,
    IsolatedQuery,
    compute_S,
    default_block,
    default_u,
    mertens_isolated,
    nu_kappa,
)
from mertens.errors import OutOfRangeError, PreconditionError, ProviderGapError
from mertens.known import M_POW2
from mertens.quotients import DivisionCounter

MU = mu_table(10**6)
MT = mertens_table(10**6)


def S_brute(y, u):
    # closed form term by term, plain division and full tables
    nu, kap = nu_kappa(y)
    s = 1 + kap * MT[nu]
    s -= sum(MT[y // k] for k in range(y // u + 1, kap + 1))
    s -= sum((y // k) * MU[k] for k in range(1, nu + 1))
    return int(s)


def test_nu_kappa():
    assert nu_kappa(100) == (10, 9)
    assert nu_kappa(99) == (9, 9)


def test_S_small_example():
    assert compute_S(4, 3, MU, MT) == -1


def test_S_exhaustive_small():
    for y in range(1, 501):
        for u in range(isqrt(y) + 1, y + 1):
            assert compute_S(y, u, MU, MT) == S_brute(y, u), (y, u)


def test_S_inverts_to_M():
    for x in (1000, 4321, 99991):
        for u in (isqrt(x) + 1, default_u(x), x - 1):
            total = sum(int(MU[n]) * compute_S(x // n, u, MU, MT) for n in range(1, x // u + 1))
            assert total == MT[x]


def test_S_counts_skips_and_divisions():
    c = DivisionCounter()
    compute_S(10**6, 10**4, MU, MT, c)
    assert c.skipped > 0 and c.true_divisions > 0


def test_S_provider_gap():
    with pytest.raises(ProviderGapError):
        compute_S(10**6, 10**3, MU[:500], MT)
    with pytest.raises(ProviderGapError):
        compute_S(10**6, 10**3, MU, MT[:500])


def test_query_checks():
    with pytest.raises(PreconditionError):
        IsolatedQuery(0)
    with pytest.raises(OutOfRangeError):
        IsolatedQuery(MAX_X)
    with pytest.raises(PreconditionError):
        IsolatedQuery(10**6, u=1000)  # u must exceed isqrt(x)
    with pytest.raises(PreconditionError):
        IsolatedQuery(100, u=100)
    assert IsolatedQuery(2).direct and not IsolatedQuery(5).direct
    assert default_u(10**9) == 500000
    assert default_block(500000) == 96000


@pytest.mark.parametrize("x", [1, 2, 10, 39, 100, 1000, 10**6])
def test_small_values(x, kernels):
    assert mertens_isolated(x, kernels=kernels).M == MT[x]


def test_random_against_table(kernels):
    rng = random.Random(7)
    for x in rng.sample(range(2, 10**6), 40):
        r = mertens_isolated(IsolatedQuery(x), nested=True, kernels=kernels)
        assert r.M == MT[x]
        if x >= 128:
            assert r.nested == {x // 128: MT[x // 128]}


@pytest.mark.parametrize("u", [1001, 5000, 20000, 500000])
def test_u_independence(u):
    x = 10**6
    assert mertens_isolated(IsolatedQuery(x, u=u)).M == 212


def test_u_independence_large():
    x = 10**9
    vals = {mertens_isolated(IsolatedQuery(x, u=u)).M for u in (40000, 500000, 2 * 10**6)}
    assert vals == {-222}


def test_powers_of_two_to_30(kernels):
    for n in range(0, 31):
        if kernels is _backend.python_kernels and n > 26:
            break
        r = mertens_isolated(IsolatedQuery(2**n), nested=True, kernels=kernels)
        assert r.M == M_POW2[n], n
        if n >= 7:
            assert r.nested[2 ** (n - 7)] == M_POW2[n - 7]


def test_nested_target_above_u():
    # the nested target 2**27 lies above u and goes through the formula itself
    r = mertens_isolated(IsolatedQuery(2**34), nested=True)
    assert (r.M, r.nested[2**27]) == (M_POW2[34], M_POW2[27])


@pytest.mark.skipif(_backend.compiled_kernels() is None, reason="compiled backend not built")
@pytest.mark.parametrize("e", [6, 7, 8, 9])
def test_true_divisions_linear_in_x_over_u(e):
    x = 10**e
    r = mertens_isolated(x, kernels=_backend.compiled_kernels())
    assert r.counters["true_divisions"] <= 4 * x / r.u
    assert r.counters["skipped"] > 0


@pytest.mark.slow
def test_runtime_scaling():
    def best(x):
        ts = []
        for _ in range(3):
            t0 = time.perf_counter()
            mertens_isolated(x)
            ts.append(time.perf_counter() - t0)
        return min(ts)

    ratios = [best(2 ** (k + 1)) / best(2**k) for k in (30, 32)]
    assert all(1.4 <= r <= 1.9 for r in ratios), ratios
