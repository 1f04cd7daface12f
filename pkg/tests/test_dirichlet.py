from fractions import Fraction

import numpy as np
import pytest

from conftest import mertens_table, mu_table
from mertens.dirichlet import (
    H,
    benito_varona_M,
    benito_varona_sweep,
    dirichlet_inverse_f,
    f,
    h,
    h_floor_form,
)
from mertens.errors import PreconditionError


def test_h_case_table():
    assert (h(6), h(7), h(9), h(11)) == (2, 0, 1, -1)
    assert [h(n) for n in range(6)] == list(H)


def test_h_floor_form():
    assert all(h_floor_form(m) == h(m) for m in range(1, 10**4))


def test_f_identity():
    # sum_{n <= y} f(n) M(y/n) = -3 for y >= 3
    M = mertens_table(3000)
    for y in range(3, 3001, 7):
        assert sum(f(n) * int(M[y // n]) for n in range(1, y + 1)) == -3


def test_small_inverse_values():
    t = dirichlet_inverse_f(100)
    assert t[1] == Fraction(1, 2)
    assert t[2] == 0 and t[4] == 0
    assert t[3] == Fraction(1, 4)  # -f(3) f^-1(1) / f(1)


def test_convolution_identity():
    limit = 10**4
    t = dirichlet_inverse_f(limit)
    conv = [Fraction(0)] * (limit + 1)
    for d in range(1, limit + 1):
        v = t[d]
        if v:
            for m in range(d, limit + 1, d):
                conv[m] += f(m // d) * v
    assert conv[1] == 1
    assert all(c == 0 for c in conv[2:])


def test_zero_density_close_to_mu():
    limit = 10**6
    t = dirichlet_inverse_f(limit)
    mu_zero = np.count_nonzero(mu_table(limit)[1:] == 0) / limit
    assert abs(t.zero_fraction() - mu_zero) <= 0.01 * mu_zero


def test_bv_derived_reproduces_M():
    M = mertens_table(10**4)
    assert benito_varona_M(100).got == M[100] == 1
    assert benito_varona_sweep(range(10, 2001)) == []


def test_bv_literal_form_is_reported_not_raised():
    bad = benito_varona_sweep(range(10, 501), "literal")
    assert bad and all(not r.matches for r in bad)
    assert all(r.expected != r.got for r in bad)


def test_bv_argument_checks():
    with pytest.raises(PreconditionError):
        benito_varona_M(100, interpretation="other")
    with pytest.raises(PreconditionError):
        benito_varona_M(10**6)
    with pytest.raises(PreconditionError):
        benito_varona_M(100, u=10)
    with pytest.raises(PreconditionError):
        dirichlet_inverse_f(0)
