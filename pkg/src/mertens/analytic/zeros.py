"""Zeta zero records and the cosine terms derived from them."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

import mpmath

from mertens.errors import IntegrityError, PrecisionError, PreconditionError

_HEADER = re.compile(r"#\s*precision=(\d+)\s+count=(\d+)")
_DEC = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")
# |zeta'(rho)| below this means the zero is (numerically) not simple
ZETA_PRIME_TOL = mpmath.mpf("1e-30")


@dataclass(frozen=True)
class ZeroRecord:
    index: int
    gamma: str
    zeta_re: str
    zeta_im: str
    precision_digits: int


@dataclass(frozen=True)
class CosTerm:
    """``a * cos(gamma * y + psi)`` with ``a = 1/|rho zeta'(rho)|``."""

    index: int
    a: mpmath.mpf
    gamma: mpmath.mpf
    psi: mpmath.mpf
    digits: int


def _sig_digits(s: str) -> int:
    mant = s.lstrip("+-").split("e")[0].split("E")[0].replace(".", "").lstrip("0")
    return len(mant)


def parse_zeros(lines, source="<zeros>") -> list[ZeroRecord]:
    it = iter(lines)
    header = None
    for lineno, line in enumerate(it, 1):
        if line.strip():
            header = (lineno, line)
            break
    if header is None:
        raise IntegrityError(f"{source}: empty zeros file")
    m = _HEADER.match(header[1].strip())
    if not m:
        raise IntegrityError(f"{source}:{header[0]}: missing '# precision=<digits> count=<n>' header")
    prec, count = int(m.group(1)), int(m.group(2))
    out: list[ZeroRecord] = []
    prev = None
    for lineno, line in enumerate(it, header[0] + 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 4 or not parts[0].isdigit() or not all(_DEC.match(p) for p in parts[1:]):
            raise IntegrityError(f"{source}:{lineno}: malformed zero record {s[:60]!r}")
        i = int(parts[0])
        if i != len(out) + 1:
            raise IntegrityError(f"{source}:{lineno}: expected index {len(out) + 1}, got {i}")
        digits = min(_sig_digits(p) for p in parts[1:3])
        if digits < prec:
            raise IntegrityError(f"{source}:{lineno}: {digits} digits, header promises {prec}")
        g = mpmath.mpf(parts[1])
        if prev is not None and not g > prev:
            raise IntegrityError(f"{source}:{lineno}: gamma not increasing")
        prev = g
        out.append(ZeroRecord(i, parts[1], parts[2], parts[3], prec))
    if len(out) != count:
        raise IntegrityError(f"{source}: header says {count} zeros, found {len(out)}")
    return out


def load_zeros(path=None, limit: int | None = None) -> list[ZeroRecord]:
    """Parse a zeros file; ``path=None`` loads the bundled 2000 zeros."""
    with mpmath.workdps(80):
        if path is None:
            text = resources.files("mertens.data").joinpath("zeros_2000.txt").read_text()
            recs = parse_zeros(text.splitlines(), "zeros_2000.txt")
        else:
            with open(path) as fh:
                recs = parse_zeros(fh, str(path))
    return recs if limit is None else recs[:limit]


def derive_terms(records, digits: int | None = None) -> list[CosTerm]:
    """``(a_i, gamma_i, psi_i)`` with ``psi_i = -arg(rho_i zeta'(rho_i))``.

    That sign makes ``2 a_i cos(gamma_i log x + psi_i)`` equal to the pair of
    conjugate terms ``x**(rho-1/2) / (rho zeta'(rho)) + conj``.
    """
    if not records:
        return []
    prec = min(r.precision_digits for r in records)
    if digits is None:
        digits = prec
    if digits > prec:
        raise PrecisionError(f"asked for {digits} digits, records carry {prec}")
    out = []
    with mpmath.workdps(digits + 10):
        for r in records:
            g = mpmath.mpf(r.gamma)
            zp = mpmath.mpc(mpmath.mpf(r.zeta_re), mpmath.mpf(r.zeta_im))
            if abs(zp) < ZETA_PRIME_TOL:
                raise PreconditionError(f"zero {r.index}: zeta' too small, zero too close to multiple")
            w = mpmath.mpc(mpmath.mpf(1) / 2, g) * zp
            out.append(CosTerm(r.index, 1 / abs(w), g, -mpmath.arg(w), digits))
    return out


def sort_by_a(terms) -> list[CosTerm]:
    return sorted(terms, key=lambda t: (-t.a, t.index))
