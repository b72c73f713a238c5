"""
Univariate polynomials with exact rational coefficients.

A polynomial is a tuple of coefficients in ascending degree order, e.g.
(1, 10, 5) is 1 + 10t + 5t^2. Trailing zeros are stripped by normalize(),
so the zero polynomial is the empty tuple.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

from padic_ducci.arith.padic import Scalar, as_rational, format_rational
from padic_ducci.errors import ZeroPolynomialError


def normalize(coeffs: Iterable[Scalar]) -> Tuple[Fraction, ...]:
    out = [as_rational(c) for c in coeffs]
    n = len(out)
    while n and out[n - 1] == 0:
        n -= 1
    return tuple(out[:n])


@dataclass(frozen=True)
class RationalPolynomial:
    coeffs: Tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        object.__setattr__(self, "coeffs", normalize(coeffs))

    @classmethod
    def cyclotomic_binomial(cls, m: int) -> "RationalPolynomial":
        """t^m - 1"""
        return cls([-1] + [0] * (m - 1) + [1])

    @property
    def degree(self) -> int:
        # -1 for the zero polynomial
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.leading == 1

    def __add__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        res = list(a)
        for i, c in enumerate(b):
            res[i] += c
        return RationalPolynomial(res)

    def __neg__(self) -> "RationalPolynomial":
        return RationalPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "RationalPolynomial":
        if not isinstance(other, RationalPolynomial):
            return RationalPolynomial(c * as_rational(other) for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return RationalPolynomial()
        res = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                res[i + j] += a * b
        return RationalPolynomial(res)

    __rmul__ = __mul__

    def __divmod__(self, other: "RationalPolynomial"):
        if other.is_zero():
            raise ZeroPolynomialError("division by the zero polynomial")
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.leading
        d = other.degree
        for k in range(len(quot) - 1, -1, -1):
            c = rem[k + d] / lead
            quot[k] = c
            if c == 0:
                continue
            for j, b in enumerate(other.coeffs):
                rem[k + j] -= c * b
        return RationalPolynomial(quot), RationalPolynomial(rem)

    def __floordiv__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        return divmod(self, other)[1]

    def derivative(self) -> "RationalPolynomial":
        return RationalPolynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "RationalPolynomial":
        if self.is_zero():
            raise ZeroPolynomialError("the zero polynomial has no monic form")
        lead = self.leading
        return RationalPolynomial(c / lead for c in self.coeffs)

    def divides(self, other: "RationalPolynomial") -> bool:
        """True iff self divides other exactly"""
        return (other % self).is_zero()

    def __call__(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        x = as_rational(x)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_strings(self) -> list:
        return [format_rational(c) for c in self.coeffs]

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = format_rational(abs(c))
            sign = "-" if c < 0 else "+"
            if i == 0:
                body = mag
            else:
                power = "t" if i == 1 else f"t^{i}"
                body = power if abs(c) == 1 else f"{mag}*{power}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


def poly_gcd(a: RationalPolynomial, b: RationalPolynomial) -> RationalPolynomial:
    """Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0"""
    while not b.is_zero():
        a, b = b, a % b
    return a if a.is_zero() else a.monic()


def squarefree_part(f: RationalPolynomial) -> RationalPolynomial:
    """f / gcd(f, f'), made monic: same roots as f, each simple"""
    if f.is_zero():
        raise ZeroPolynomialError("squarefree part of the zero polynomial")
    g = poly_gcd(f, f.derivative())
    if g.is_zero():
        return f.monic()
    return (f // g).monic()


def from_roots(roots: Sequence[Scalar]) -> RationalPolynomial:
    """prod (t - r)"""
    out = RationalPolynomial([1])
    for r in roots:
        out = out * RationalPolynomial([-as_rational(r), 1])
    return out
