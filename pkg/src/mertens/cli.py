"""Command line entry point: ``mertens <command> ...``.

Exit status: 0 success, 1 a verification failed, 2 usage error,
3 bad or inconsistent data.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile
import time

from mertens.checkpoint import atomic_write, format_events, jnum
from mertens.errors import MertensError, PreconditionError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3

_POW = re.compile(r"^\s*(\d+)\s*(?:\^|\*\*)\s*(\d+)\s*$")
_SCI = re.compile(r"^\s*(\d+)[eE](\d+)\s*$")


def parse_int(text: str) -> int:
    """Integers written plainly, as ``a^b``/``a**b`` or as ``1e9``."""
    t = text.replace("_", "")
    m = _POW.match(t)
    if m:
        return int(m.group(1)) ** int(m.group(2))
    m = _SCI.match(t)
    if m:
        return int(m.group(1)) * 10 ** int(m.group(2))
    try:
        return int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    from mertens.sieve import default_threads
    return default_threads()


def _emit(obj, out=None) -> None:
    text = json.dumps(obj, indent=None if out is None else 2) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        atomic_write(out, text)


def cmd_sieve(args) -> int:
    from mertens.sieve import bucket_scan, mertens_scan

    kw = dict(stride=args.stride, block_len=args.block_len, checkpoint=args.checkpoint,
              resume=args.resume, halt_after=args.halt_after)
    to_stdout = args.out == "-"
    if args.checkpoint and to_stdout:
        raise PreconditionError("checkpointed runs need an events file, not stdout")
    tmp = None
    if args.checkpoint:
        kw["events"] = args.out
    elif not to_stdout:
        # plain runs write to a temporary file that is renamed on success
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(args.out)), prefix=".tmp-")
        os.close(fd)
        kw["events"] = tmp
    t0 = time.perf_counter()
    try:
        if args.bucket:
            st = bucket_scan(args.limit, **kw)
        else:
            st = mertens_scan(args.limit, threads=_threads(args), **kw)
    except BaseException:
        if tmp and os.path.exists(tmp):
            os.unlink(tmp)
        raise
    if tmp:
        os.replace(tmp, args.out)
    if to_stdout:
        sys.stdout.write(format_events(st.zeros, st.extrema, st.samples))
    summary = {"limit": jnum(args.limit), "n_last": jnum(st.n_last), "M": jnum(st.M_last),
               "max": jnum(st.max), "min": jnum(st.min), "zeros": len(st.zeros),
               "extrema": len(st.extrema), "samples": len(st.samples), "complete": st.complete,
               "seconds": round(time.perf_counter() - t0, 3)}
    print(json.dumps(summary), file=sys.stderr if to_stdout else sys.stdout)
    return EXIT_OK


def cmd_mertens(args) -> int:
    from mertens.combinatorial import IsolatedQuery, mertens_isolated

    q = IsolatedQuery(args.x, args.u)
    r = mertens_isolated(q, nested=args.verify_nested)
    out = {"x": jnum(r.x), "M": jnum(r.M), "u": jnum(r.u), "seconds": round(r.seconds, 3)}
    status = EXIT_OK
    if args.verify_nested:
        t = args.x // 128
        if t <= 10**9:
            from mertens.sieve import mertens_values
            ref = mertens_values([t])[t]
        else:
            ref = mertens_isolated(IsolatedQuery(t)).M
        got = r.nested.get(t)
        out["nested"] = {"x": jnum(t), "M": jnum(got), "reference": jnum(ref), "ok": got == ref}
        if got != ref:
            status = EXIT_FAIL
    if args.json:
        _emit(out)
    else:
        print(f"M({r.x}) = {r.M}   (u={r.u}, {r.seconds:.3f}s)")
        if "nested" in out:
            n = out["nested"]
            print(f"M({t}) = {got}   reference {ref}   {'ok' if n['ok'] else 'MISMATCH'}")
    return status


def _terms(path, n):
    from mertens.analytic import derive_terms, load_zeros
    return derive_terms(load_zeros(path, limit=n))


def cmd_bounds(args) -> int:
    from mertens.analytic import bound_search, random_baseline

    terms = _terms(args.zeros, max(args.N, args.eval_N))
    cert, out = bound_search(terms, args.N, args.nu, args.sign, args.delta, args.eta, args.eval_N,
                             args.ordering)
    if args.baseline_samples:
        cert.stats["random_baseline"] = random_baseline(terms, args.eval_N, args.baseline_samples)
    if args.out:
        cert.save(args.out)
    print(cert.to_json(), end="")
    return EXIT_OK if cert.lll_verified else EXIT_FAIL


def cmd_qtilde(args) -> int:
    import mpmath
    import numpy as np

    from mertens.analytic import q_tilde, q_tilde_array

    terms = _terms(args.zeros, args.N)
    if args.range:
        lo, hi, count = args.range
        xs = np.unique(np.geomspace(lo, hi, int(count)).astype(np.int64))
        qt = q_tilde_array(np.log(xs.astype(np.float64)), args.N, terms)
        rows = ["x,q_tilde" + (",q" if args.compare else "")]
        ref = None
        if args.compare:
            from mertens.sieve import mertens_values
            ref = mertens_values(xs.tolist())
        for x, v in zip(xs.tolist(), qt.tolist()):
            line = f"{x},{v:.10f}"
            if ref is not None:
                line += f",{ref[x] / x ** 0.5:.10f}"
            rows.append(line)
        text = "\n".join(rows) + "\n"
        if args.out:
            atomic_write(args.out, text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    if args.x is None:
        raise PreconditionError("give --x or --range")
    v = q_tilde(mpmath.log(args.x), args.N, terms)
    out = {"x": jnum(args.x), "N": args.N, "q_tilde": mpmath.nstr(v, 20)}
    if args.compare:
        from mertens.sieve import mertens_values
        M = mertens_values([args.x])[args.x]
        out["M"] = jnum(M)
        out["q"] = M / args.x ** 0.5
    _emit(out, args.out)
    return EXIT_OK


def cmd_zero_stats(args) -> int:
    from mertens import zerostats as zs

    if args.action == "band" and args.g is not None:
        g = args.g
        _emit({"g": g, "P_g": zs.band_primes(g), "multiplier": str(zs.band_multiplier(g))})
        return EXIT_OK
    zeros = zs.ZeroList.from_events(args.zeros, args.limit)
    if args.action == "vcount":
        _emit({"x": jnum(args.x), "V": zs.count_zeros(zeros, args.x)})
    elif args.action == "positivity":
        mz = zs.mu_at(zeros.values[:int((zeros.values <= args.x).sum()) + 1])
        sub = zs.ZeroList(zeros.values[:len(mz)], zeros.limit, zeros.final_M)
        f = zs.positivity(sub, mz, args.x)
        _emit({"x": jnum(args.x), "numerator": jnum(f.numerator), "denominator": jnum(f.denominator),
               "M_plus": float(f)})
    elif args.action == "gaps":
        m = args.m if args.m is not None else len(zeros)
        hist = zs.gap_histogram(zeros, m)
        if args.csv:
            sys.stdout.write(zs.gaps_csv(hist))
        else:
            _emit({"m": m, "counts": {str(k): v for k, v in sorted(hist.counts.items())}})
    else:  # band report over the whole zero list
        hist = zs.gap_histogram(zeros, len(zeros))
        rep = zs.band_ratio(hist, band=(args.band_lo, args.band_hi))
        _emit({"mean_ratio": rep.mean_ratio, "band": list(rep.band), "pass": rep.passed,
               "gaps_used": [u[0] for u in rep.used]})
        return EXIT_OK if rep.passed else EXIT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    from mertens.verify import cmd_verify as run

    rep = run(args.level, args.zeros, args.checkpoint, args.events)
    if args.json:
        _emit(rep.to_dict())
    else:
        for c in rep.checks:
            print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  expected={c.expected} got={c.got}")
        print("overall:", "PASS" if rep.ok else "FAIL")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_verify_cert(args) -> int:
    from mertens.analytic import BoundCertificate, verify_certificate

    cert = BoundCertificate.load(args.cert)
    terms = _terms(args.zeros, max(cert.N_reduce, cert.N_eval))
    chk = verify_certificate(cert, terms)
    _emit({"h_value": cert.h_value, "h_recomputed": chk.h_recomputed, "h_matches": chk.h_matches,
           "direction_ok": chk.direction_ok, "precision_stable": chk.precision_stable,
           "zeros_match": chk.fingerprint_ok, "ok": chk.ok})
    return EXIT_OK if chk.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    from mertens import __version__
    from mertens.sieve import DEFAULT_BLOCK_LEN, DEFAULT_STRIDE

    p = argparse.ArgumentParser(prog="mertens", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: $MERTENS_THREADS or 1)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sieve", help="scan M(n) up to a limit and write JSON-lines events")
    s.add_argument("--limit", type=parse_int, required=True)
    s.add_argument("--stride", type=parse_int, default=DEFAULT_STRIDE)
    s.add_argument("--block-len", type=parse_int, default=DEFAULT_BLOCK_LEN)
    s.add_argument("--out", default="-", help="events file, or - for stdout")
    s.add_argument("--checkpoint")
    s.add_argument("--resume", action="store_true")
    s.add_argument("--halt-after", type=int, help="stop after this many blocks")
    s.add_argument("--bucket", action="store_true", help="use the bucketed large-prime schedule")
    s.set_defaults(func=cmd_sieve)

    s = sub.add_parser("mertens", help="M(x) at a single x")
    s.add_argument("--x", type=parse_int, required=True)
    s.add_argument("--u", type=parse_int)
    s.add_argument("--verify-nested", action="store_true", help="also compute and check M(x // 128)")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_mertens)

    s = sub.add_parser("bounds", help="lattice search for a large |h(y, N)| and write a certificate")
    s.add_argument("--zeros", help="zeros file (default: bundled 2000 zeros)")
    s.add_argument("--N", type=int, default=25)
    s.add_argument("--nu", type=int, default=64)
    s.add_argument("--sign", choices=("plus", "minus"), default="plus")
    s.add_argument("--delta", default="0.99")
    s.add_argument("--eta", default="0.501")
    s.add_argument("--eval-N", type=int, default=200)
    s.add_argument("--ordering", choices=("by_gamma", "by_a_desc"), default="by_gamma")
    s.add_argument("--baseline-samples", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("qtilde", help="truncated zero-sum estimate of M(x)/sqrt(x)")
    s.add_argument("--zeros")
    s.add_argument("--N", type=int, default=2000)
    s.add_argument("--x", type=parse_int)
    s.add_argument("--range", nargs=3, type=parse_int, metavar=("LO", "HI", "COUNT"),
                   help="CSV over COUNT log-spaced x")
    s.add_argument("--compare", action="store_true", help="include the sieve value of q(x)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_qtilde)

    s = sub.add_parser("zero-stats", help="statistics of the zeros of M from a sieve events file")
    s.add_argument("--zeros", help="events file written by 'sieve'")
    s.add_argument("--limit", type=parse_int, help="source limit of the events file")
    zsub = s.add_subparsers(dest="action", required=True)
    a = zsub.add_parser("vcount")
    a.add_argument("--x", type=parse_int, required=True)
    a = zsub.add_parser("positivity")
    a.add_argument("--x", type=parse_int, required=True)
    a = zsub.add_parser("gaps")
    a.add_argument("--m", type=int)
    a.add_argument("--csv", action="store_true")
    a = zsub.add_parser("band")
    a.add_argument("--g", type=parse_int, help="multiplier for one gap length")
    a.add_argument("--band-lo", type=float, default=1.3)
    a.add_argument("--band-hi", type=float, default=1.7)
    s.set_defaults(func=cmd_zero_stats)

    s = sub.add_parser("verify", help="cross-check sieve, combinatorial and reference tables")
    s.add_argument("--level", choices=("quick", "full"), default="quick")
    s.add_argument("--zeros")
    s.add_argument("--checkpoint")
    s.add_argument("--events")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("verify-cert", help="re-evaluate a bound certificate")
    s.add_argument("cert")
    s.add_argument("--zeros")
    s.set_defaults(func=cmd_verify_cert)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "zero-stats" and not (args.action == "band" and args.g is not None) \
            and not args.zeros:
        parser.error("zero-stats needs --zeros")
    try:
        return args.func(args)
    except BrokenPipeError:
        return EXIT_OK
    except PreconditionError as e:
        print(f"mertens: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (MertensError, OSError) as e:
        print(f"mertens: data error: {e}", file=sys.stderr)
        return EXIT_DATA

if __name__ == "__main__":
    sys.exit(main())
