"""
Newton polygons of rational polynomials with respect to a prime p.

The polygon of f = sum a_i t^i is the lower convex hull of the points
(i, vp(a_i)) for a_i != 0. A segment of slope s and horizontal length l
certifies exactly l roots (over an algebraic closure of Q_p) of
valuation -s. A zero constant term contributes roots of valuation +inf,
counted separately in ``zero_roots``.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from padic_ducci.arith.padic import INFINITY, format_rational, vp
from padic_ducci.arith.poly import RationalPolynomial
from padic_ducci.errors import NonMonicPolynomialError, ZeroPolynomialError


@dataclass(frozen=True)
class Segment:
    slope: Fraction
    length: int

    @property
    def root_valuation(self) -> Fraction:
        return -self.slope


@dataclass(frozen=True)
class NewtonPolygon:
    segments: Tuple[Segment, ...]
    zero_roots: int = 0

    @property
    def degree(self) -> int:
        return self.zero_roots + sum(s.length for s in self.segments)

    def root_valuations(self) -> Tuple:
        """Multiset of root valuations, ascending, +inf last"""
        vals = []
        for seg in sorted(self.segments, key=lambda s: s.root_valuation):
            vals.extend([seg.root_valuation] * seg.length)
        vals.extend([INFINITY] * self.zero_roots)
        return tuple(vals)

    def to_dict(self) -> dict:
        return {
            "segments": [
                {"slope": format_rational(s.slope), "length": s.length} for s in self.segments
            ],
            "zero_roots": self.zero_roots,
        }


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_hull(points: List[Tuple[int, Fraction]]) -> List[Tuple[int, Fraction]]:
    """Lower convex hull (monotone chain), collinear interior points dropped"""
    hull: List[Tuple[int, Fraction]] = []
    for pt in sorted(points):
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return hull


def newton_polygon(f: RationalPolynomial, p: int) -> NewtonPolygon:
    if f.is_zero():
        raise ZeroPolynomialError("Newton polygon of the zero polynomial")
    if not f.is_monic():
        raise NonMonicPolynomialError("Newton polygon needs a monic polynomial", field="polynomial")

    zero_roots = 0
    while f.coeffs[zero_roots] == 0:
        zero_roots += 1

    points = [
        (i, Fraction(vp(c, p)))
        for i, c in enumerate(f.coeffs)
        if i >= zero_roots and c != 0
    ]
    hull = lower_hull(points)
    segments = tuple(
        Segment(slope=(b[1] - a[1]) / (b[0] - a[0]), length=b[0] - a[0])
        for a, b in zip(hull, hull[1:])
    )
    return NewtonPolygon(segments=segments, zero_roots=zero_roots)
