import os
import subprocess
import sys

import numpy as np
import pytest

from mertens import BACKEND, _backend
from mertens.magic import magic_make
from mertens.sieve import classify_block, log_table, mertens_scan, raw_block, sieve_block

comp = _backend.compiled_kernels()
py = _backend.python_kernels
needs_compiled = pytest.mark.skipif(comp is None, reason="compiled backend not built")


def test_backend_name():
    assert BACKEND in ("compiled", "python")
    assert py.BACKEND == "python"


@pytest.mark.parametrize("choice", ["python", "auto"])
def test_env_selects_backend(choice):
    env = dict(os.environ, MERTENS_BACKEND=choice)
    r = subprocess.run([sys.executable, "-c", "import mertens; print(mertens.BACKEND)"],
                       capture_output=True, text=True, env=env, check=True)
    want = "python" if choice == "python" or comp is None else "compiled"
    assert r.stdout.strip() == want


@needs_compiled
def test_magic_div_array_parity():
    rng = np.random.default_rng(1)
    n = rng.integers(0, 2**62, 2000, dtype=np.uint64)
    for d in (3, 7, 641, 2**31 - 1, 10**9 + 7):
        m = magic_make(d)
        a = comp.magic_div_array(n, m.mul, m.add, m.shift)
        b = py.magic_div_array(n, m.mul, m.add, m.shift)
        assert (a == b).all() and (a == n // np.uint64(d)).all()


@needs_compiled
@pytest.mark.parametrize("start", [1, 10**6 + 3, 10**11 + 17])
def test_sieve_and_classify_parity(start):
    L = 13860 * 3
    logs = log_table(int((start + L) ** 0.5) + 1)
    bufs = []
    for k in (comp, py):
        b = raw_block(start, L)
        sieve_block(b, logs, kernels=k)
        bufs.append(classify_block(b, kernels=k).values.copy())
    assert (bufs[0] == bufs[1]).all()


@needs_compiled
def test_accumulate_parity():
    rng = np.random.default_rng(5)
    mu = rng.integers(-1, 2, 50000).astype(np.int8)
    outs = []
    for k in (comp, py):
        z, e, s = [], [], []
        r = k.accumulate(mu, 1000, 3, 5, -2, 777, z, e, s)
        outs.append((tuple(r), z, e, s))
    assert outs[0] == outs[1]


@needs_compiled
def test_scan_parity():
    a = mertens_scan(5 * 10**5, stride=10**4, block_len=13860 * 4, kernels=comp)
    b = mertens_scan(5 * 10**5, stride=10**4, block_len=13860 * 4, kernels=py)
    assert (a.zeros, a.extrema, a.samples, a.running) == (b.zeros, b.extrema, b.samples, b.running)
