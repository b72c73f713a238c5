import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from padic_ducci.arith.linalg import RationalMatrix, RationalVector, mat_vec_mul
from padic_ducci.arith.padic import (
    INFINITY,
    Prime,
    Valuation,
    format_rational,
    format_valuation,
    padic_abs,
    vp,
)
from padic_ducci.errors import DimensionMismatchError, SchemaError, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 10_000
DEFAULT_MAX_STORED_STATES = 1_000_000
DEFAULT_DIVERGENCE_EXPONENT = 50
DEFAULT_CONVERGENCE_EXPONENT = 50


class IterationMode(Enum):
    NORM_MODE = "norm"
    LINEAR_MODE = "linear"

    @classmethod
    def parse(cls, value: str) -> "IterationMode":
        for mode in cls:
            if mode.value == value:
                return mode
        raise SchemaError(f"unknown mode {value!r} (expected 'norm' or 'linear')", field="mode")


class Outcome(Enum):
    TERMINATED = "terminated"
    CYCLE = "cycle"
    NORM_DIVERGED = "norm_diverged"
    CONVERGED = "converged"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class DucciInstance:
    p: Prime
    matrix: RationalMatrix
    seed: RationalVector
    mode: IterationMode = IterationMode.LINEAR_MODE
    instance_id: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "p", Prime(self.p))
        if self.matrix.n != len(self.seed):
            raise DimensionMismatchError(
                f"dimension mismatch: {self.matrix.n}x{self.matrix.n} matrix, seed of length {len(self.seed)}",
                field="seed",
            )

    @property
    def n(self) -> int:
        return self.matrix.n


@dataclass(frozen=True)
class OrbitLimits:
    max_steps: int = DEFAULT_MAX_STEPS
    max_stored_states: int = DEFAULT_MAX_STORED_STATES
    # None means p^divergence_exponent / p^-convergence_exponent for the instance's p;
    # convergence applies to linear orbits only, see run_orbit
    divergence_threshold: Optional[Fraction] = None
    convergence_threshold: Optional[Fraction] = None
    divergence_exponent: int = DEFAULT_DIVERGENCE_EXPONENT
    convergence_exponent: int = DEFAULT_CONVERGENCE_EXPONENT

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValidationError("max_steps must be positive", field="max_steps")
        if self.max_stored_states < 1:
            raise ValidationError("max_stored_states must be positive", field="max_stored_states")
        if self.divergence_threshold is not None and self.divergence_threshold <= 0:
            raise ValidationError("divergence threshold must be positive", field="threshold")
        if self.convergence_threshold is not None and self.convergence_threshold < 0:
            raise ValidationError("convergence threshold must be nonnegative", field="convergence_threshold")

    def resolve(self, p: int) -> Tuple[Fraction, Fraction]:
        """(divergence, convergence) thresholds for prime p"""
        div = self.divergence_threshold
        if div is None:
            div = Fraction(p) ** self.divergence_exponent
        conv = self.convergence_threshold
        if conv is None:
            conv = Fraction(p) ** (-self.convergence_exponent)
        return div, conv


@dataclass(frozen=True)
class OrbitReport:
    outcome: Outcome
    steps: int
    preperiod: Optional[int] = None
    period: Optional[int] = None
    valuation_trace: Tuple[Tuple[Valuation, Valuation], ...] = ()
    states_visited: int = 0
    instance_id: Optional[str] = None
    mode: Optional[IterationMode] = None
    states: Optional[Tuple[Tuple, ...]] = field(default=None, compare=False)

    def outcome_dict(self) -> dict:
        if self.outcome is Outcome.CYCLE:
            return {"kind": self.outcome.value, "preperiod": self.preperiod, "period": self.period}
        if self.outcome is Outcome.UNRESOLVED:
            return {"kind": self.outcome.value, "steps_run": self.steps}
        return {"kind": self.outcome.value, "step": self.steps}

    def to_dict(self, trace_cap: Optional[int] = None) -> dict:
        data = {"outcome": self.outcome_dict()}
        if self.instance_id is not None:
            data["instance_id"] = self.instance_id
        if self.mode is not None:
            data["mode"] = self.mode.value
        if self.outcome is Outcome.CYCLE:
            data["preperiod"] = self.preperiod
            data["period"] = self.period
        data["steps"] = self.steps
        data["states_visited"] = self.states_visited
        data["valuation_trace"] = [
            [format_valuation(lo), format_valuation(hi)] for lo, hi in self.valuation_trace
        ]
        if self.states is not None:
            shown = list(self.states)
            if trace_cap is not None and len(shown) > trace_cap:
                shown = shown[:trace_cap]
                data["states"] = [[_format_entry(e) for e in s] for s in shown] + ["..."]
            else:
                data["states"] = [[_format_entry(e) for e in s] for s in shown]
        return data


def _format_entry(e) -> str:
    return format_rational(e) if isinstance(e, Fraction) else str(e)


def encode_state(x: Sequence) -> str:
    """Canonical key of a state: comma-joined reduced fractions"""
    return ",".join(_format_entry(e) for e in x)


# Classical integer Ducci map

CLASSICAL_ROWS = (
    (1, -1, 0, 0),
    (0, 1, -1, 0),
    (0, 0, 1, -1),
    (-1, 0, 0, 1),
)


def classical_matrix() -> RationalMatrix:
    return RationalMatrix(CLASSICAL_ROWS)


def classical_step(x: Sequence[int]) -> Tuple[int, ...]:
    """(|x1-x2|, |x2-x3|, |x3-x4|, |x4-x1|)"""
    if len(x) != 4:
        raise DimensionMismatchError(f"classical map needs 4 entries, got {len(x)}", field="seed")
    return tuple(abs(x[i] - x[(i + 1) % 4]) for i in range(4))


# p-adic Ducci operator

def norm_step(inst: DucciInstance, x: RationalVector) -> RationalVector:
    """delta_p(x) = |D_p x|_p componentwise"""
    y = mat_vec_mul(inst.matrix, x)
    return RationalVector(padic_abs(e, inst.p) for e in y)


def linear_step(inst: DucciInstance, x: RationalVector) -> RationalVector:
    return mat_vec_mul(inst.matrix, x)


def step_function(inst: DucciInstance) -> Callable[[RationalVector], RationalVector]:
    if inst.mode is IterationMode.NORM_MODE:
        return lambda x: norm_step(inst, x)
    return lambda x: linear_step(inst, x)


def valuation_range(x: Sequence[Fraction], p: int) -> Tuple[Valuation, Valuation]:
    vals = [vp(e, p) for e in x]
    return min(vals), max(vals)


def _minimal_period(trajectory: List[str], first: int, repeat_key: str, repeat_index: int) -> int:
    for d in range(1, repeat_index - first + 1):
        if first + d == repeat_index or trajectory[first + d] == repeat_key:
            return d
    return repeat_index - first


def _drive(
    start: Tuple,
    step: Callable,
    is_zero: Callable,
    max_steps: int,
    max_stored_states: int,
    measure: Optional[Callable] = None,
    record_states: bool = False,
    instance_id: Optional[str] = None,
    mode: Optional[IterationMode] = None,
) -> OrbitReport:
    """Iterate step from start with exact first-seen-index cycle detection.

    measure(state) returns (min valuation, max valuation, verdict) where
    verdict is None or one of Outcome.NORM_DIVERGED / Outcome.CONVERGED.
    """
    seen = {}
    trajectory: List[str] = []
    trace = []
    recorded = [] if record_states else None
    state = start
    k = 0

    def report(outcome, steps, preperiod=None, period=None):
        return OrbitReport(
            outcome=outcome,
            steps=steps,
            preperiod=preperiod,
            period=period,
            valuation_trace=tuple(trace),
            states_visited=k + 1,
            instance_id=instance_id,
            mode=mode,
            states=tuple(recorded) if recorded is not None else None,
        )

    while True:
        verdict = None
        if measure is not None:
            lo, hi, verdict = measure(state)
            trace.append((lo, hi))
        if recorded is not None:
            recorded.append(tuple(state))

        if is_zero(state):
            return report(Outcome.TERMINATED, k)

        key = encode_state(state)
        first = seen.get(key)
        if first is not None:
            period = _minimal_period(trajectory, first, key, k)
            return report(Outcome.CYCLE, k, preperiod=first, period=period)

        if verdict is not None:
            return report(verdict, k)

        if k >= max_steps or len(seen) >= max_stored_states:
            return report(Outcome.UNRESOLVED, k)

        seen[key] = k
        trajectory.append(key)
        state = step(state)
        k += 1


def _convergence_rule(inst: DucciInstance, limits: OrbitLimits, threshold: Fraction):
    """(threshold, valuation floor) for CONVERGED, or None when it cannot apply.

    Only linear orbits converge: a norm-mode state is itself a norm and says
    nothing about the next one. The state must also have contracted past the
    seed, and the default threshold is additionally p^-k times the seed's norm.
    """
    if inst.mode is not IterationMode.LINEAR_MODE or inst.seed.is_zero():
        return None
    seed_lo = valuation_range(inst.seed.entries, inst.p)[0]
    if limits.convergence_threshold is None:
        relative = Fraction(inst.p) ** (-(seed_lo + limits.convergence_exponent))
        threshold = min(threshold, relative)
    return threshold, seed_lo


def run_orbit(
    inst: DucciInstance,
    limits: Optional[OrbitLimits] = None,
    record_states: bool = False,
) -> OrbitReport:
    """Iterate the instance's mode until zero, repetition, threshold or budget"""
    limits = limits or OrbitLimits()
    divergence, convergence = limits.resolve(inst.p)
    rule = _convergence_rule(inst, limits, convergence)
    p = inst.p
    step = step_function(inst)

    def measure(x: RationalVector):
        lo, hi = valuation_range(x.entries, p)
        if lo == INFINITY:
            return lo, hi, None
        max_norm = Fraction(p) ** (-lo)
        if max_norm > divergence:
            return lo, hi, Outcome.NORM_DIVERGED
        if rule is not None and lo > rule[1] and max_norm < rule[0]:
            return lo, hi, Outcome.CONVERGED
        return lo, hi, None

    report = _drive(
        inst.seed,
        step,
        lambda x: x.is_zero(),
        limits.max_steps,
        limits.max_stored_states,
        measure=measure,
        record_states=record_states,
        instance_id=inst.instance_id,
        mode=inst.mode,
    )
    logger.debug(
        "orbit %s (%s, p=%d): %s after %d steps",
        inst.instance_id or "-",
        inst.mode.value,
        p,
        report.outcome.value,
        report.steps,
    )
    return report


def run_classical(
    seed: Sequence[int],
    max_steps: int = 1000,
    record_states: bool = False,
) -> OrbitReport:
    """Orbit of the classical four-number map"""
    start = tuple(int(v) for v in seed)
    if len(start) != 4:
        raise DimensionMismatchError(f"classical map needs 4 entries, got {len(start)}", field="seed")
    if any(v < 0 for v in start):
        raise ValidationError("classical seeds must be nonnegative integers", field="seed")
    return _drive(
        start,
        classical_step,
        lambda x: not any(x),
        max_steps,
        max_steps + 1,
        record_states=record_states,
    )
