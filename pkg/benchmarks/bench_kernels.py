"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from mertens import _backend
from mertens.combinatorial import IsolatedQuery, mertens_isolated
from mertens.sieve import WHEEL_PERIOD, log_table, mertens_scan, mobius_block


def best_of(fn, repeat):
    ts = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        ts.append(time.perf_counter() - t)
    return min(ts), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    comp = _backend.compiled_kernels()
    if comp is None:
        raise SystemExit("compiled extension not built; run pip install -e . first")
    py = _backend.python_kernels
    scale = 1 if args.quick else 10
    L = WHEEL_PERIOD * 72 * scale
    start = 10**9
    logs = log_table(int((start + L) ** 0.5) + 1)
    x_iso = 10**9 if args.quick else 10**10
    cases = [
        (f"mobius block len={L} at 1e9", lambda k: mobius_block(start, L, logs, kernels=k)),
        (f"mertens_scan to {2 * 10**6 * scale}",
         lambda k: mertens_scan(2 * 10**6 * scale, stride=10**5, kernels=k).running),
        (f"isolated M({x_iso:.0e})", lambda k: mertens_isolated(IsolatedQuery(x_iso), kernels=k).M),
    ]
    print(f"{'case':40s} {'compiled':>10s} {'python':>10s} {'speedup':>8s}")
    for name, fn in cases:
        tc, rc = best_of(lambda: fn(comp), args.repeat)
        tp, rp = best_of(lambda: fn(py), 1)
        same = np.array_equal(rc, rp) if isinstance(rc, np.ndarray) else rc == rp
        print(f"{name:40s} {tc:10.4f} {tp:10.4f} {tp / tc:8.1f}x {'' if same else 'MISMATCH'}")


if __name__ == "__main__":
    main()
