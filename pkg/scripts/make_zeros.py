#!/usr/bin/env python3
"""Generate a zeta-zero data file with mpmath.

Writes ``# precision=<digits> count=<n>`` followed by one line per zero::

    i  gamma_i  Re zeta'(rho_i)  Im zeta'(rho_i)

Usage: python scripts/make_zeros.py COUNT OUT [--digits 50]
"""
import argparse
import sys

import mpmath


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("count", type=int)
    ap.add_argument("out")
    ap.add_argument("--digits", type=int, default=50)
    args = ap.parse_args(argv)

    # guard digits so the printed values are correct to --digits
    mpmath.mp.dps = args.digits + 15
    shown = args.digits + 5
    with open(args.out, "w") as fh:
        fh.write(f"# precision={args.digits} count={args.count}\n")
        for i in range(1, args.count + 1):
            rho = mpmath.zetazero(i)
            dz = mpmath.zeta(rho, derivative=1)
            fh.write(
                f"{i} {mpmath.nstr(rho.imag, shown, min_fixed=-1, max_fixed=10**6)} "
                f"{mpmath.nstr(dz.real, shown, strip_zeros=False)} "
                f"{mpmath.nstr(dz.imag, shown, strip_zeros=False)}\n"
            )
            if i % 100 == 0:
                fh.flush()
                print(i, file=sys.stderr, flush=True)


if __name__ == "__main__":
    main()
