"""Cross-checks between the independent ways of computing M."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from mertens.checkpoint import read_checkpoint, read_events
from mertens.combinatorial import mertens_isolated
from mertens.errors import IntegrityError
from mertens.known import M_POW2
from mertens.sieve import mertens_values


@dataclass
class Check:
    name: str
    expected: object
    got: object
    passed: bool


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, expected, got, passed=None) -> Check:
        c = Check(name, expected, got, expected == got if passed is None else bool(passed))
        self.checks.append(c)
        return c

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [
            {"name": c.name, "expected": str(c.expected), "got": str(c.got), "pass": c.passed}
            for c in self.checks]}


def check_pow2(report: VerificationReport, n_max: int) -> None:
    for n in range(n_max + 1):
        r = mertens_isolated(1 << n, nested=n >= 7)
        report.add(f"M(2^{n})={M_POW2[n]}", M_POW2[n], r.M)
        if n >= 7:
            t = (1 << n) // 128
            report.add(f"nested M(2^{n - 7})", M_POW2[n - 7], r.nested[t])


def check_cross(report: VerificationReport, limit: int = 10**6, samples: int = 100, seed: int = 0) -> None:
    rng = random.Random(seed)
    xs = sorted({rng.randint(1, limit) for _ in range(samples)} | {limit})
    ref = mertens_values(xs)
    bad = [(x, ref[x], mertens_isolated(x).M) for x in xs]
    bad = [b for b in bad if b[1] != b[2]]
    report.add(f"sieve == combinatorial on {len(xs)} x <= {limit}", [], bad)


def check_qtilde(report: VerificationReport, zeros_path=None, N: int = 2000, samples: int = 50,
                 tol: float = 0.15, min_agree: float = 0.8, seed: int = 0) -> None:
    from mertens.analytic import derive_terms, load_zeros, q_tilde_array
    terms = derive_terms(load_zeros(zeros_path, limit=N))
    rng = np.random.default_rng(seed)
    xs = np.unique(np.exp(rng.uniform(np.log(1e6), np.log(1e8), samples)).astype(np.int64))
    ref = mertens_values(xs.tolist())
    q = np.array([ref[int(x)] for x in xs]) / np.sqrt(xs)
    qt = q_tilde_array(np.log(xs.astype(np.float64)), N, terms)
    err = float(np.abs(qt - q).max())
    agree = float(np.mean(np.sign(qt) == np.sign(q)))
    report.add(f"max |q~ - q| <= {tol} (N={N})", f"<= {tol}", round(err, 6), err <= tol)
    report.add(f"sign agreement >= {min_agree}", f">= {min_agree}", agree, agree >= min_agree)


def check_checkpoint(report: VerificationReport, checkpoint, events=None) -> None:
    try:
        ck = read_checkpoint(checkpoint)
        if events is not None:
            n = sum(1 for _ in read_events(events, ck.events_offset))
            if n != ck.n_zeros + ck.n_extrema + ck.n_samples:
                raise IntegrityError("event count differs from checkpoint")
        report.add("checkpoint-integrity", "ok", "ok")
    except (IntegrityError, OSError) as e:
        report.add("checkpoint-integrity", "ok", str(e), False)


def cmd_verify(level: str = "quick", zeros_path=None, checkpoint=None, events=None) -> VerificationReport:
    if level not in ("quick", "full"):
        raise ValueError("level must be quick or full")
    rep = VerificationReport()
    check_cross(rep)
    check_pow2(rep, 24 if level == "quick" else 40)
    if level == "full":
        check_qtilde(rep, zeros_path)
    if checkpoint is not None:
        check_checkpoint(rep, checkpoint, events)
    return rep
