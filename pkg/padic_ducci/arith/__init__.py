"""Exact arithmetic: p-adic valuations, rational matrices and polynomials."""

from .padic import (
    INFINITY,
    Prime,
    format_rational,
    format_valuation,
    is_p_integer,
    padic_abs,
    padic_distance,
    parse_rational,
    vp,
)
from .poly import RationalPolynomial, poly_gcd, squarefree_part
from .linalg import (
    RationalMatrix,
    RationalVector,
    char_poly,
    determinant,
    evaluate_at_matrix,
    mat_mul,
    mat_pow,
    mat_vec_mul,
)

__all__ = [
    "INFINITY",
    "Prime",
    "format_rational",
    "format_valuation",
    "is_p_integer",
    "padic_abs",
    "padic_distance",
    "parse_rational",
    "vp",
    "RationalPolynomial",
    "poly_gcd",
    "squarefree_part",
    "RationalMatrix",
    "RationalVector",
    "char_poly",
    "determinant",
    "evaluate_at_matrix",
    "mat_mul",
    "mat_pow",
    "mat_vec_mul",
]
