"""Explicit-formula sums over zeta zeros.

All high-precision work is done with mpmath at a precision derived from the
term data.  Arguments ``gamma * y + psi`` are reduced modulo ``2 pi``
explicitly before the cosine so the reduction error is visible and bounded
by the stored digits of ``gamma``.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import mpmath
import numpy as np

from mertens.errors import PrecisionError, PreconditionError


def ingham_kernel(t):
    """``(1 - t) cos(pi t) + sin(pi t) / pi`` on ``[0, 1]``."""
    if not 0 <= t <= 1:
        raise PreconditionError(f"kernel argument {t} outside [0, 1]")
    pi = mpmath.pi
    t = mpmath.mpf(t) if not isinstance(t, Rational) else mpmath.mpf(t.numerator) / t.denominator
    return (1 - t) * mpmath.cos(pi * t) + mpmath.sin(pi * t) / pi


def to_mpf(y):
    if isinstance(y, Fraction):
        return mpmath.mpf(y.numerator) / y.denominator
    return mpmath.mpf(y)


def int_digits(y) -> int:
    """Decimal digits in the integer part of ``|y|``."""
    if isinstance(y, Fraction):
        v = abs(y.numerator) // y.denominator
    else:
        v = int(abs(mpmath.mpf(y)))
    return len(str(v))


def _by_gamma(terms, N):
    if N < 0:
        raise PreconditionError("N must be >= 0")
    ordered = sorted(terms, key=lambda t: t.index)
    if len(ordered) < N:
        raise PreconditionError(f"{N} terms requested, {len(ordered)} available")
    return ordered[:N]


def required_digits(y) -> int:
    return int_digits(y) + 10


def _check_precision(terms, y):
    need = required_digits(y)
    have = min((t.digits for t in terms), default=need)
    if have < need:
        raise PrecisionError(f"|y| has {int_digits(y)} integer digits; zeros need {need} digits, have {have}")
    return have


def _cos_sum(terms, y, weights=None, dps_scale=1):
    have = _check_precision(terms, y)
    with mpmath.workdps(dps_scale * (have + 10)):
        yy = to_mpf(y)
        twopi = 2 * mpmath.pi
        s = mpmath.mpf(0)
        for i, t in enumerate(terms):
            arg = t.gamma * yy + t.psi
            arg -= twopi * mpmath.floor(arg / twopi)
            w = t.a if weights is None else t.a * weights[i]
            s += w * mpmath.cos(arg)
        return 2 * s


def ingham_h(y, N: int, terms, kernel: bool = True, dps_scale: int = 1):
    """``2 sum_{i<=N} a_i f(gamma_i/gamma_N) cos(gamma_i y + psi_i)``.

    With ``kernel=False`` the weights are dropped, which is :func:`q_tilde`.
    ``dps_scale`` multiplies the working precision (for stability checks).
    """
    ts = _by_gamma(terms, N)
    if not ts:
        return mpmath.mpf(0)
    if not kernel:
        return _cos_sum(ts, y, dps_scale=dps_scale)
    have = _check_precision(ts, y)
    with mpmath.workdps(dps_scale * (have + 10)):
        gN = ts[-1].gamma
        w = [ingham_kernel(t.gamma / gN) for t in ts]
    return _cos_sum(ts, y, w, dps_scale)


def h_upper(N: int, terms):
    """``2 sum a_i f(gamma_i/gamma_N)``, the largest value ``|h(y, N)|`` can take."""
    ts = _by_gamma(terms, N)
    if not ts:
        return mpmath.mpf(0)
    gN = ts[-1].gamma
    return 2 * mpmath.fsum(t.a * ingham_kernel(t.gamma / gN) for t in ts)


def q_tilde(log_x, N: int, terms):
    """Truncated estimate ``2 sum_{i<=N} a_i cos(gamma_i log x + psi_i)`` of ``M(x)/sqrt(x)``."""
    return ingham_h(log_x, N, terms, kernel=False)


class FloatTerms:
    """float64 copies of ``(a, gamma, psi)`` for bulk evaluation at moderate ``|y|``."""

    def __init__(self, terms, N: int | None = None):
        ts = sorted(terms, key=lambda t: t.index)
        if N is not None:
            ts = ts[:N]
        self.N = len(ts)
        self.a = np.array([float(t.a) for t in ts])
        self.gamma = np.array([float(t.gamma) for t in ts])
        self.psi = np.array([float(t.psi) for t in ts])
        self.kernel = np.array([float(ingham_kernel(t.gamma / ts[-1].gamma)) for t in ts]) if ts else self.a

    def sums(self, ys, kernel: bool, chunk: int = 256) -> np.ndarray:
        ys = np.asarray(ys, dtype=np.float64)
        w = 2 * self.a * (self.kernel if kernel else 1.0)
        out = np.empty(len(ys))
        # fixed chunking keeps the summation order, hence the result, stable
        for s in range(0, len(ys), chunk):
            arg = np.outer(ys[s:s + chunk], self.gamma) + self.psi
            out[s:s + chunk] = np.cos(np.mod(arg, 2 * np.pi)) @ w
        return out


def q_tilde_array(log_xs, N: int, terms) -> np.ndarray:
    return FloatTerms(terms, N).sums(log_xs, kernel=False)


def trivial_zero_sum(x, n_terms: int):
    """``sum_{n<=n_terms} (-1)^(n-1) (2 pi/x)^(2n) / ((2n)! n zeta(2n+1))``."""
    if n_terms < 1:
        raise PreconditionError("need at least one trivial-zero term")
    xx = to_mpf(x)
    if xx <= 0:
        raise PreconditionError("x must be positive")
    c = (2 * mpmath.pi / xx) ** 2
    s = mpmath.mpf(0)
    p = mpmath.mpf(1)
    for n in range(1, n_terms + 1):
        p *= c
        s += (-1) ** (n - 1) * p / (mpmath.factorial(2 * n) * n * mpmath.zeta(2 * n + 1))
    return s


def r_term(x, mu_of=None):
    """``-2``, plus ``mu(x)/2`` when ``x`` is an integer."""
    if isinstance(x, Fraction) and x.denominator != 1:
        return mpmath.mpf(-2)
    if isinstance(x, (int, Fraction)) or (mpmath.mpf(x) == int(mpmath.mpf(x))):
        n = int(x)
        if mu_of is None:
            from mertens.sieve import mobius_block
            m = int(mobius_block(n, 1)[0])
        else:
            m = mu_of(n)
        return mpmath.mpf(-2) + mpmath.mpf(m) / 2
    return mpmath.mpf(-2)


def titchmarsh_M(x, N: int, trivial_terms: int, terms, mu_of=None):
    """Truncated explicit formula for ``M(x)`` with ``N`` zero pairs."""
    xx = to_mpf(x)
    if xx <= 0:
        raise PreconditionError("x must be positive")
    ts = _by_gamma(terms, N)
    have = min((t.digits for t in ts), default=30)
    with mpmath.workdps(have):
        main = mpmath.sqrt(xx) * (q_tilde(mpmath.log(xx), N, ts) if ts else 0)
        return main + r_term(x, mu_of) + trivial_zero_sum(x, trivial_terms)
