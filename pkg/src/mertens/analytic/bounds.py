"""Lattice search for ``y`` with large ``|h(y, N)|`` and the resulting certificates."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from mertens.analytic.formulas import FloatTerms, h_upper, ingham_h
from mertens.analytic.lattice import check_lll, lll_reduce
from mertens.analytic.zeros import sort_by_a
from mertens.checkpoint import atomic_write
from mertens.errors import IntegrityError, PrecisionError, PreconditionError, StructureError

Y_SHIFT = 10
SIGNS = ("plus", "minus")
ORDERINGS = ("by_gamma", "by_a_desc")
CERT_FORMAT = "mertens-bound-certificate/1"
LOG2_10 = 3.321928094887362


@dataclass
class LatticeBasis:
    N: int
    nu: int
    sign: str
    ordering: str
    vectors: list  # N+2 integer vectors of length N+2
    term_index: list  # zero indices in basis order

    @property
    def pivot(self) -> int:
        return (1 << self.nu) * self.N**4


def select_terms(terms, N, ordering):
    if ordering not in ORDERINGS:
        raise PreconditionError(f"ordering must be one of {ORDERINGS}")
    ts = sorted(terms, key=lambda t: t.index) if ordering == "by_gamma" else sort_by_a(terms)
    if len(ts) < N:
        raise PreconditionError(f"{N} terms needed, {len(ts)} available")
    return ts[:N]


def build_basis(terms, N: int, nu: int, sign: str = "plus", ordering: str = "by_gamma") -> LatticeBasis:
    """The ``(N+2)``-dimensional basis whose short vectors give ``gamma_i y + psi_i ~ 0 (mod 2 pi)``.

    For ``sign='minus'`` the target is ``gamma_i y + psi_i + pi``.
    """
    if sign not in SIGNS:
        raise PreconditionError(f"sign must be one of {SIGNS}")
    if N < 1:
        raise PreconditionError("N must be >= 1")
    if nu < max(2 * N, Y_SHIFT):
        raise PreconditionError(f"nu must be >= max(2N, {Y_SHIFT}) = {max(2 * N, Y_SHIFT)}")
    ts = select_terms(terms, N, ordering)
    bits = int(min(t.digits for t in ts) * LOG2_10)
    if bits < nu + 64:
        raise PrecisionError(f"zeros carry about {bits} bits, basis needs nu + 64 = {nu + 64}")
    D = N + 2
    V = [[0] * D for _ in range(D)]
    with mpmath.workprec(nu + 128):
        scale = mpmath.ldexp(1, nu)
        for i, t in enumerate(ts):
            sa = mpmath.sqrt(t.a)
            # phase in the arg(rho zeta') convention, shifted by pi for the minus search;
            # row i of the pivot combination is 2^nu sqrt(a)(gamma z/2^10 - phase - 2 pi m)
            phase = -t.psi if sign == "plus" else -t.psi + mpmath.pi
            V[0][i] = -int(mpmath.floor(sa * phase * scale))
            V[1][i] = int(mpmath.floor(sa * t.gamma * mpmath.ldexp(1, nu - Y_SHIFT)))
            V[2 + i][i] = int(mpmath.floor(2 * mpmath.pi * sa * scale))
    V[0][N] = (1 << nu) * N**4
    V[1][N + 1] = 1
    return LatticeBasis(N, nu, sign, ordering, V, [t.index for t in ts])


@dataclass
class ReductionOutcome:
    vectors: list
    v: list
    z: int
    y: Fraction
    residuals: list

    @property
    def residual_norm(self) -> float:
        return float(sum(r * r for r in self.residuals))


def residuals_of(v, N, nu) -> list[float]:
    return [v[i] / 2.0**nu for i in range(N)]


def extract_y(reduced, N: int, nu: int) -> ReductionOutcome:
    """Find the single vector carrying the pivot and read ``y = z / 2**10`` off it."""
    pivot = (1 << nu) * N**4
    cands = [v for v in reduced if v[N] != 0]
    if len(cands) != 1:
        raise StructureError(f"{len(cands)} reduced vectors have a nonzero pivot component, expected 1")
    v = list(cands[0])
    if abs(v[N]) != pivot:
        raise StructureError(f"pivot component is {v[N]}, expected +-{pivot}")
    if v[N] < 0:
        v = [-c for c in v]
    z = v[N + 1]
    return ReductionOutcome([list(r) for r in reduced], v, z, Fraction(z, 1 << Y_SHIFT),
                            residuals_of(v, N, nu))


def terms_fingerprint(terms) -> str:
    h = hashlib.sha256()
    for t in sorted(terms, key=lambda t: t.index):
        h.update(f"{t.index} {mpmath.nstr(t.a, 30)} {mpmath.nstr(t.psi, 30)};".encode())
    return h.hexdigest()[:16]


@dataclass
class BoundCertificate:
    y: Fraction
    N_reduce: int
    nu: int
    delta: str
    eta: str
    N_eval: int
    sign: str
    ordering: str
    h_value: str
    direction: str
    quality: str = ""
    zeros_fingerprint: str = ""
    lll_verified: bool = False
    stats: dict = field(default_factory=dict)

    def to_json(self) -> str:
        d = asdict(self)
        d["y"] = {"mantissa": str(self.y.numerator * ((1 << Y_SHIFT) // self.y.denominator)),
                  "exponent": -Y_SHIFT, "decimal": _dyadic_decimal(self.y)}
        from mertens import __version__
        d = {"format": CERT_FORMAT, "tool_version": __version__, **d}
        return json.dumps(d, indent=2, sort_keys=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "BoundCertificate":
        try:
            d = json.loads(text)
            if d.pop("format") != CERT_FORMAT:
                raise ValueError("unknown certificate format")
            d.pop("tool_version", None)
            yd = d.pop("y")
            y = Fraction(int(yd["mantissa"]), 1) * Fraction(2) ** int(yd["exponent"])
            if _dyadic_decimal(y) != yd["decimal"]:
                raise ValueError("y mantissa and decimal disagree")
            return cls(y=y, **d)
        except (KeyError, TypeError, ValueError) as e:
            raise IntegrityError(f"malformed certificate: {e}") from e

    def save(self, path) -> None:
        atomic_write(path, self.to_json())

    @classmethod
    def load(cls, path) -> "BoundCertificate":
        with open(path) as fh:
            return cls.from_json(fh.read())


def _dyadic_decimal(y: Fraction) -> str:
    # y = m / 2**k has an exact decimal expansion with k fractional digits
    k = y.denominator.bit_length() - 1
    if y.denominator != 1 << k:
        raise PreconditionError("y is not dyadic")
    scaled = abs(y.numerator) * 5**k
    s = str(scaled).rjust(k + 1, "0")
    body = s[:-k] + "." + s[-k:] if k else s
    return ("-" if y < 0 else "") + body


def random_baseline(terms, N_eval: int, samples: int = 10_000, seed: int = 0) -> float:
    """Largest ``|h(y, N_eval)|`` over uniform ``y`` in ``[0, 2 pi 2**10 / gamma_1]``."""
    ft = FloatTerms(terms, N_eval)
    rng = np.random.default_rng(seed)
    ys = rng.uniform(0.0, 2 * np.pi * (1 << Y_SHIFT) / ft.gamma[0], samples)
    return float(np.abs(ft.sums(ys, kernel=True)).max())


def bound_search(terms, N: int, nu: int, sign: str = "plus", delta="0.99", eta="0.501",
                 N_eval: int = 200, ordering: str = "by_gamma") -> tuple[BoundCertificate, ReductionOutcome]:
    """Build, reduce, extract ``y`` and evaluate ``h(y, N_eval)``."""
    t0 = time.perf_counter()
    basis = build_basis(terms, N, nu, sign, ordering)
    t1 = time.perf_counter()
    reduced = lll_reduce(basis.vectors, Fraction(delta), Fraction(eta))
    t2 = time.perf_counter()
    check = check_lll(reduced, Fraction(delta), Fraction(eta))
    out = extract_y(reduced, N, nu)
    h = ingham_h(out.y, N_eval, terms)
    up = h_upper(N_eval, terms)
    t3 = time.perf_counter()
    pivot0 = residuals_of(basis.vectors[0], N, nu)
    cert = BoundCertificate(
        y=out.y, N_reduce=N, nu=nu, delta=str(delta), eta=str(eta), N_eval=N_eval, sign=sign,
        ordering=ordering, h_value=mpmath.nstr(h, 30), direction="upper" if sign == "plus" else "lower",
        quality=mpmath.nstr(h / up, 12), zeros_fingerprint=terms_fingerprint(terms[:max(N, N_eval)]),
        lll_verified=check.ok,
        stats={"build_s": round(t1 - t0, 3), "reduce_s": round(t2 - t1, 3), "eval_s": round(t3 - t2, 3),
               "residual_norm": out.residual_norm,
               "initial_residual_norm": float(sum(r * r for r in pivot0))})
    return cert, out


@dataclass
class CertificateCheck:
    h_recomputed: str
    h_matches: bool
    direction_ok: bool
    precision_stable: bool
    fingerprint_ok: bool

    @property
    def ok(self) -> bool:
        return self.h_matches and self.direction_ok and self.precision_stable and self.fingerprint_ok


def verify_certificate(cert: BoundCertificate, terms, tol: float = 1e-6) -> CertificateCheck:
    h = ingham_h(cert.y, cert.N_eval, terms)
    # the recomputation at doubled working precision must agree closely
    h2 = ingham_h(cert.y, cert.N_eval, terms, dps_scale=2)
    stable = abs(h - h2) < 1e-8
    hv = mpmath.mpf(cert.h_value)
    direction_ok = hv > 0 if cert.direction == "upper" else hv < 0
    fp = terms_fingerprint(sorted(terms, key=lambda t: t.index)[:max(cert.N_reduce, cert.N_eval)])
    return CertificateCheck(mpmath.nstr(h, 30), abs(h - hv) <= tol, direction_ok, stable,
                            fp == cert.zeros_fingerprint)
