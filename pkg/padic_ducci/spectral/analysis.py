import logging
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from padic_ducci.arith.linalg import RationalMatrix, RationalVector, char_poly, mat_pow
from padic_ducci.arith.padic import INFINITY, format_valuation, is_p_integer
from padic_ducci.arith.poly import RationalPolynomial, squarefree_part
from padic_ducci.dynamics.orbit import IterationMode
from padic_ducci.errors import ValidationError
from padic_ducci.spectral.newton import NewtonPolygon, newton_polygon

logger = logging.getLogger(__name__)

DEFAULT_MAX_ORDER = 64


class SpectrumClass(Enum):
    CONTRACTIVE = "contractive"
    UNITARY = "unitary"
    EXPANSIVE = "expansive"
    MIXED = "mixed"


class Claim(Enum):
    TERMINATES = "terminates"
    NEVER_ZERO = "never reaches zero"
    PERIODIC = "periodic"
    UNBOUNDED_GROWTH = "norm growth unbounded"
    DIAGONAL_LAW = "eventually periodic, preperiod <= 1, period 1 or 2"
    INDETERMINATE = "indeterminate"
    UNSPECIFIED = "unspecified"


# clause tags carried by every prediction
CLAUSE_CONTRACTIVE = "contractive-spectrum-terminates"
CLAUSE_UNIT_NONVANISHING = "unit-spectrum-nonvanishing"
CLAUSE_UNIT_INTEGRAL = "integral-unit-spectrum-nonterminating"
CLAUSE_UNIT_PERIODIC = "unit-spectrum-periodic"
CLAUSE_EXPANSIVE = "expansive-spectrum-unbounded"
CLAUSE_MIXED = "mixed-spectrum-no-claim"
CLAUSE_DIAGONAL_LAW = "diagonal-norm-law"
CLAUSE_NONE = "none"


@dataclass(frozen=True)
class UnityOrder:
    order: int
    certified: bool


@dataclass(frozen=True)
class Prediction:
    claim: Claim
    clause: str
    mode: IterationMode = IterationMode.LINEAR_MODE
    period_bound: Optional[int] = None
    certified: bool = False
    instance_id: Optional[str] = None

    def to_dict(self) -> dict:
        data = {
            "claim": self.claim.value,
            "paper_clause": self.clause,
            "mode": self.mode.value,
        }
        if self.period_bound is not None:
            data["period_bound"] = self.period_bound
            data["certified"] = self.certified
        return data


@dataclass(frozen=True)
class BehaviorPrediction:
    """Published claim (proved for the linear iteration) plus the norm-mode law"""

    spectrum: SpectrumClass
    linear: Prediction
    norm: Prediction

    def for_mode(self, mode: IterationMode) -> Prediction:
        """What is provable for the given iteration semantics"""
        return self.linear if mode is IterationMode.LINEAR_MODE else self.norm

    def published_claim(self, mode: IterationMode) -> Prediction:
        """The claim as stated for the norm operator, applied to mode"""
        return replace(self.linear, mode=mode)


@dataclass(frozen=True)
class SpectralReport:
    polygon: NewtonPolygon
    valuations: Tuple
    spectrum_class: SpectrumClass
    unity: Optional[UnityOrder]
    prediction: BehaviorPrediction

    @property
    def unity_order(self) -> Optional[int]:
        return self.unity.order if self.unity else None

    def to_dict(self) -> dict:
        return {
            "polygon": self.polygon.to_dict(),
            "valuations": [format_valuation(v) for v in self.valuations],
            "class": self.spectrum_class.value,
            "unity_order": self.unity_order,
            "certified": bool(self.unity and self.unity.certified),
            "prediction": self.prediction.linear.to_dict(),
            "norm_prediction": self.prediction.norm.to_dict(),
        }


def eigenvalue_valuations(d: RationalMatrix, p: int) -> Tuple:
    """Valuations of the eigenvalues of D read off the Newton polygon of its
    characteristic polynomial; +inf for each zero eigenvalue"""
    return newton_polygon(char_poly(d), p).root_valuations()


def classify_spectrum(valuations: Sequence) -> SpectrumClass:
    if not valuations:
        raise ValidationError("empty valuation multiset", field="valuations")
    if any(v < 0 for v in valuations):
        return SpectrumClass.EXPANSIVE
    if all(v > 0 for v in valuations):
        return SpectrumClass.CONTRACTIVE
    if all(v == 0 for v in valuations):
        return SpectrumClass.UNITARY
    return SpectrumClass.MIXED


def has_integral_contractive_norms(valuations: Sequence) -> bool:
    """True iff every eigenvalue norm lies in {0, p^-1, p^-2, ...}.

    Implies CONTRACTIVE; the converse needs integral valuations, since a
    ramified eigenvalue can have valuation 1/2.
    """
    return all(
        v == INFINITY or (Fraction(v).denominator == 1 and v >= 1) for v in valuations
    )


def roots_of_unity_order(d: RationalMatrix, max_order: int = DEFAULT_MAX_ORDER) -> Optional[UnityOrder]:
    """Smallest m <= max_order whose t^m - 1 the squarefree part of chi_D divides.

    The order is certified when additionally D^m = I, which is what forces
    linear orbits to be periodic.
    """
    if max_order < 1:
        raise ValidationError("max_order must be positive", field="max_order")
    core = squarefree_part(char_poly(d))
    for m in range(1, max_order + 1):
        if core.divides(RationalPolynomial.cyclotomic_binomial(m)):
            certified = mat_pow(d, m) == RationalMatrix.identity(d.n)
            return UnityOrder(order=m, certified=certified)
    return None


def is_integral_matrix(d: RationalMatrix, p: int) -> bool:
    return all(is_p_integer(e, p) for e in d.entries())


def _linear_prediction(
    spectrum: SpectrumClass,
    unity: Optional[UnityOrder],
    integral: bool,
) -> Prediction:
    if spectrum is SpectrumClass.CONTRACTIVE:
        return Prediction(Claim.TERMINATES, CLAUSE_CONTRACTIVE)
    if spectrum is SpectrumClass.EXPANSIVE:
        return Prediction(Claim.UNBOUNDED_GROWTH, CLAUSE_EXPANSIVE)
    if spectrum is SpectrumClass.UNITARY:
        if unity is not None and unity.certified:
            return Prediction(
                Claim.PERIODIC, CLAUSE_UNIT_PERIODIC, period_bound=unity.order, certified=True
            )
        clause = CLAUSE_UNIT_INTEGRAL if integral else CLAUSE_UNIT_NONVANISHING
        bound = unity.order if unity is not None else None
        return Prediction(Claim.NEVER_ZERO, clause, period_bound=bound, certified=False)
    return Prediction(Claim.INDETERMINATE, CLAUSE_MIXED)


def _norm_prediction(d: RationalMatrix) -> Prediction:
    if d.is_diagonal():
        # |lambda x|_p has valuation -(v(lambda) + v(x)): an involution per component
        return Prediction(
            Claim.DIAGONAL_LAW, CLAUSE_DIAGONAL_LAW, mode=IterationMode.NORM_MODE, period_bound=2
        )
    return Prediction(Claim.UNSPECIFIED, CLAUSE_NONE, mode=IterationMode.NORM_MODE)


def _analyze(
    d: RationalMatrix,
    p: int,
    max_order: int,
    seed: Optional[RationalVector],
    instance_id: Optional[str],
):
    chi = char_poly(d)
    polygon = newton_polygon(chi, p)
    valuations = polygon.root_valuations()
    spectrum = classify_spectrum(valuations)
    unity = roots_of_unity_order(d, max_order) if spectrum is SpectrumClass.UNITARY else None

    integral = is_integral_matrix(d, p) and (
        seed is None or all(is_p_integer(e, p) for e in seed)
    )
    linear = replace(_linear_prediction(spectrum, unity, integral), instance_id=instance_id)
    norm = replace(_norm_prediction(d), instance_id=instance_id)
    logger.debug("spectrum %s, valuations %s, unity %s", spectrum.value, valuations, unity)
    return polygon, valuations, spectrum, unity, BehaviorPrediction(spectrum, linear, norm)


def predict_behavior(
    d: RationalMatrix,
    p: int,
    max_order: int = DEFAULT_MAX_ORDER,
    seed: Optional[RationalVector] = None,
    instance_id: Optional[str] = None,
) -> BehaviorPrediction:
    return _analyze(d, p, max_order, seed, instance_id)[4]


def spectral_report(
    d: RationalMatrix,
    p: int,
    max_order: int = DEFAULT_MAX_ORDER,
    seed: Optional[RationalVector] = None,
    instance_id: Optional[str] = None,
) -> SpectralReport:
    polygon, valuations, spectrum, unity, prediction = _analyze(d, p, max_order, seed, instance_id)
    return SpectralReport(
        polygon=polygon,
        valuations=valuations,
        spectrum_class=spectrum,
        unity=unity,
        prediction=prediction,
    )
