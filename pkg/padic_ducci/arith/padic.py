"""
Exact p-adic valuation and absolute value on the rationals.

Scalars are ``fractions.Fraction`` values, which are always kept in
reduced form with a positive denominator, so equality is structural and
zero is uniquely ``0/1``. Valuations are ``int`` for nonzero inputs and
``math.inf`` for zero.
"""

import math
import re
from fractions import Fraction
from typing import Union

from padic_ducci.errors import InvalidPrimeError, MalformedRationalError

Rational = Fraction
Valuation = Union[int, float]
Scalar = Union[int, Fraction]

INFINITY = math.inf

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$", re.ASCII)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Prime(int):
    """An integer known to be prime (checked by trial division)"""

    def __new__(cls, value: int, field: str = "p"):
        if isinstance(value, Prime):
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise InvalidPrimeError("p must be an integer", field=field)
        if not _is_prime(value):
            raise InvalidPrimeError("p must be prime", field=field)
        return super().__new__(cls, value)

    def __repr__(self) -> str:
        return f"Prime({int(self)})"


def as_rational(x: Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def _int_valuation(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp(x: Scalar, p: int) -> Valuation:
    """Return k with x = p^k * a/b, p dividing neither a nor b; +inf for zero.

    >>> vp(8, 2)
    3
    >>> vp(Fraction(3, 4), 2)
    -2
    """
    x = as_rational(x)
    if x == 0:
        return INFINITY
    return _int_valuation(abs(x.numerator), p) - _int_valuation(x.denominator, p)


def padic_abs(x: Scalar, p: int) -> Fraction:
    """|x|_p = p^(-vp(x)) as an exact rational, 0 for x = 0"""
    v = vp(x, p)
    if v == INFINITY:
        return Fraction(0)
    return Fraction(p) ** (-v)


def padic_distance(x: Scalar, y: Scalar, p: int) -> Fraction:
    return padic_abs(as_rational(x) - as_rational(y), p)


def is_p_integer(x: Scalar, p: int) -> bool:
    """True iff x lies in Z_p, i.e. its reduced denominator is prime to p"""
    return vp(x, p) >= 0


def parse_rational(text: str, field: str = "rational") -> Fraction:
    """Parse "a/b" or "a"; b must be nonzero"""
    if not isinstance(text, str):
        if isinstance(text, int) and not isinstance(text, bool):
            return Fraction(text)
        raise MalformedRationalError(f"expected a rational string, got {text!r}", field=field)

    match = _RATIONAL_RE.match(text)
    if not match:
        raise MalformedRationalError(f"malformed rational {text!r}", field=field)

    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise MalformedRationalError(f"zero denominator in {text!r}", field=field)
    return Fraction(numerator, denominator)


def format_rational(x: Scalar) -> str:
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_valuation(v) -> Union[int, str]:
    """JSON form of a valuation: int, rational string, or "inf" """
    if v == INFINITY:
        return "inf"
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else format_rational(v)
    return int(v)
