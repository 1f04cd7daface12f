import numpy as np
import pytest

from mertens import _backend


def mu_trial(n):
    """Mobius by trial division; deliberately independent of the sieve."""
    if n == 1:
        return 1
    k = 0
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            k += 1
        p += 1
    if n > 1:
        k += 1
    return -1 if k & 1 else 1


_CACHE = {}


def mu_table(limit):
    """mu(n) for n <= limit with index 0 unused (linear sieve, no logs)."""
    if limit not in _CACHE:
        mu = np.ones(limit + 1, dtype=np.int64)
        mu[0] = 0
        is_comp = np.zeros(limit + 1, dtype=bool)
        for p in range(2, limit + 1):
            if not is_comp[p]:
                is_comp[2 * p::p] = True
                mu[p::p] *= -1
                mu[p * p::p * p] = 0
        _CACHE[limit] = mu
    return _CACHE[limit]


def mertens_table(limit):
    return np.cumsum(mu_table(limit))


_compiled = _backend.compiled_kernels()
BACKENDS = [pytest.param(_backend.python_kernels, id="python")]
if _compiled is not None:
    BACKENDS.append(pytest.param(_compiled, id="compiled"))


@pytest.fixture(params=BACKENDS)
def kernels(request):
    return request.param


@pytest.fixture(scope="session")
def terms200():
    from mertens.analytic import derive_terms, load_zeros
    return derive_terms(load_zeros(limit=200))


@pytest.fixture(scope="session")
def terms2000():
    from mertens.analytic import derive_terms, load_zeros
    return derive_terms(load_zeros())


# (criterion, passed, detail) rows filled in by test_acceptance.py
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit, ok, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {crit:>2}: {detail}")
