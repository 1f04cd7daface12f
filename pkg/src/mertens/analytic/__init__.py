"""Zeta-zero formulas for q(x) = M(x)/sqrt(x) and the lattice search for large values."""

from mertens.analytic.bounds import (
    BoundCertificate,
    LatticeBasis,
    ReductionOutcome,
    bound_search,
    build_basis,
    extract_y,
    random_baseline,
    verify_certificate,
)
from mertens.analytic.formulas import (
    h_upper,
    ingham_h,
    ingham_kernel,
    q_tilde,
    q_tilde_array,
    titchmarsh_M,
    trivial_zero_sum,
)
from mertens.analytic.lattice import check_lll, lll_reduce
from mertens.analytic.zeros import CosTerm, ZeroRecord, derive_terms, load_zeros

__all__ = [
    "BoundCertificate",
    "CosTerm",
    "LatticeBasis",
    "ReductionOutcome",
    "ZeroRecord",
    "bound_search",
    "build_basis",
    "check_lll",
    "derive_terms",
    "extract_y",
    "h_upper",
    "ingham_h",
    "ingham_kernel",
    "lll_reduce",
    "load_zeros",
    "q_tilde",
    "q_tilde_array",
    "random_baseline",
    "titchmarsh_M",
    "trivial_zero_sum",
    "verify_certificate",
]
