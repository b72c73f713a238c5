from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padic_ducci.arith.poly import RationalPolynomial, from_roots, poly_gcd, squarefree_part
from padic_ducci.errors import ZeroPolynomialError


def poly(*coeffs):
    return RationalPolynomial(coeffs)


def test_normalize_strips_trailing_zeros():
    assert poly(1, 2, 0, 0).coeffs == (1, 2)
    assert poly(0, 0).is_zero()
    assert poly().degree == -1


def test_str():
    assert str(poly(Fraction(1, 4), -1, 1)) == "t^2 - t + 1/4"
    assert str(poly(-1, 0, 0, 0, 1)) == "t^4 - 1"
    assert str(poly(0, Fraction(-3, 2))) == "-3/2*t"
    assert str(poly()) == "0"


def test_arithmetic():
    f = poly(-1, 1)  # t - 1
    g = poly(1, 1)  # t + 1
    assert f * g == poly(-1, 0, 1)
    assert f + g == poly(0, 2)
    assert f - f == poly()
    assert 2 * f == poly(-2, 2)


def test_divmod():
    q, r = divmod(poly(-1, 0, 1), poly(-1, 1))
    assert q == poly(1, 1)
    assert r.is_zero()

    q, r = divmod(poly(1, 0, 1), poly(-1, 1))
    assert q == poly(1, 1)
    assert r == poly(2)


def test_division_by_zero_polynomial():
    with pytest.raises(ZeroPolynomialError):
        divmod(poly(1, 1), poly())


def test_evaluate():
    f = poly(Fraction(1, 4), -1, 1)
    assert f(Fraction(1, 2)) == 0
    assert f(0) == Fraction(1, 4)


def test_derivative():
    assert poly(5, 3, 0, 2).derivative() == poly(3, 0, 6)
    assert poly(7).derivative().is_zero()


def test_gcd_is_monic():
    a = from_roots([1, 2, 2])
    b = from_roots([2, 3]) * 5
    assert poly_gcd(a, b) == poly(-2, 1)
    assert poly_gcd(poly(), poly()).is_zero()


def test_cyclotomic_binomial():
    assert RationalPolynomial.cyclotomic_binomial(1) == poly(-1, 1)
    assert RationalPolynomial.cyclotomic_binomial(3) == poly(-1, 0, 0, 1)


@pytest.mark.parametrize(
    "f,expected",
    [
        (poly(Fraction(1, 4), -1, 1), poly(Fraction(-1, 2), 1)),
        (poly(-1, 0, 0, 0, 1), poly(-1, 0, 0, 0, 1)),
        (poly(0, 0, 1), poly(0, 1)),
        (poly(3), poly(1)),
    ],
)
def test_squarefree_part(f, expected):
    assert squarefree_part(f) == expected


def test_squarefree_part_of_zero():
    with pytest.raises(ZeroPolynomialError):
        squarefree_part(poly())


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=6))
def test_squarefree_part_keeps_each_root_once(roots):
    f = from_roots(roots)
    core = squarefree_part(f)
    assert core == from_roots(sorted(set(roots)))
    assert core.divides(f)
