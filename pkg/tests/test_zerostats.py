from fractions import Fraction

import numpy as np
import pytest

from conftest import mertens_table, mu_table
from mertens.errors import IntegrityError, OutOfRangeError, PreconditionError
from mertens.sieve import mertens_scan
from mertens.zerostats import (
    GapHistogram,
    ZeroList,
    band_classes,
    band_multiplier,
    band_primes,
    band_ratio,
    count_zeros,
    gap_histogram,
    gaps_csv,
    mu_at,
    positivity,
    positivity_csv,
    sign_series,
    vcount_csv,
)

LIMIT = 10**6
M = mertens_table(LIMIT)


@pytest.fixture(scope="module")
def zl():
    return ZeroList.from_stats(mertens_scan(LIMIT, block_len=13860 * 8))


@pytest.fixture(scope="module")
def muz(zl):
    return mu_at(zl.values)


def test_zero_list_checks():
    with pytest.raises(IntegrityError):
        ZeroList([5, 3], 10)
    with pytest.raises(IntegrityError):
        ZeroList([1], 10)
    with pytest.raises(IntegrityError):
        ZeroList([20], 10)


def test_counts(zl):
    for e, v in enumerate([1, 6, 92, 406, 1549, 5361], 1):
        assert count_zeros(zl, 10**e) == v
    assert count_zeros(zl, 2) == 0 and count_zeros(zl, 3) == 1
    with pytest.raises(OutOfRangeError):
        count_zeros(zl, LIMIT + 5)


def test_mu_at_matches_table(zl, muz):
    mu = mu_table(LIMIT)
    assert (muz == mu[zl.values]).all()


@pytest.mark.parametrize("x", [1, 2, 3, 39, 40, 1000, 54321, LIMIT])
def test_positivity_against_table(zl, muz, x):
    assert positivity(zl, muz, x) == Fraction(int(np.count_nonzero(M[1:x + 1] > 0)), x)


def test_sign_series(zl, muz):
    assert (sign_series(zl, muz, LIMIT) == np.sign(M[1:])).all()


def test_positivity_needs_tail_sign(zl, muz):
    bare = ZeroList(zl.values, zl.limit)
    with pytest.raises(PreconditionError):
        positivity(bare, muz, LIMIT)
    with pytest.raises(PreconditionError):
        positivity(zl, muz[:-1], 100)


def test_events_roundtrip(tmp_path):
    ev = tmp_path / "e.jsonl"
    st = mertens_scan(10**5, stride=10**4, block_len=13860, events=ev)
    z = ZeroList.from_events(ev)
    assert z.values.tolist() == st.zeros and z.limit == 10**5 and z.final_M == st.M_last
    mz = mu_at(z.values)
    assert positivity(z, mz, 10**5) == Fraction(int(np.count_nonzero(M[1:10**5 + 1] > 0)), 10**5)


def test_gap_histogram(zl):
    h = gap_histogram(zl, 1000)
    assert sum(h.counts.values()) == 999
    d = np.diff(zl.values[:1000])
    assert h.counts[2] == np.count_nonzero(d == 2)
    with pytest.raises(PreconditionError):
        gap_histogram(zl, len(zl) + 1)
    with pytest.raises(IntegrityError):
        GapHistogram({2: 3}, 10)


def test_band_primes_and_multiplier():
    assert band_primes(1) == [] and band_primes(5) == [2] and band_primes(37) == [2, 3]
    assert band_multiplier(1) == 1
    assert band_multiplier(5) == Fraction(3, 2)
    assert band_multiplier(37) == Fraction(12, 7)
    assert band_primes(901) == [2, 3, 5]
    assert band_multiplier(901) == Fraction(3, 2) * Fraction(8, 7) * Fraction(24, 23)


def test_band_classes_agree():
    cl = band_classes(5000)
    assert all(list(cl[g]) == band_primes(g) for g in range(1, 5001))


def test_band_ratio_picks_isolated_classes():
    counts = {4: 100, 5: 150, 6: 100, 8: 80, 9: 200, 10: 80}
    r = band_ratio(GapHistogram(counts, sum(counts.values()) + 1))
    # g = 9 has P = {2} but its neighbour 10 has P = {3}, so only g = 5 is used
    assert [u[0] for u in r.used] == [5]
    assert r.mean_ratio == pytest.approx(1.5) and r.passed


def test_csv_outputs(zl, muz):
    assert vcount_csv(zl, [10, 100]) == "x,V\n10,1\n100,6\n"
    lines = positivity_csv(zl, muz, [10]).splitlines()
    assert lines[0] == "x,num,den,M_plus"
    assert lines[1].startswith("10,")
    g = gaps_csv(gap_histogram(zl, 50)).splitlines()
    assert g[0] == "g,count,P_g,multiplier"
