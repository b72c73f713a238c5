"""
Prediction-versus-observation sweeps.

Every generated instance is analysed spectrally once and then iterated in
each requested mode. Two verdicts are recorded per run: ``verdict`` checks
the published claim (stated for the norm operator, proved for the linear
iteration) against what the run observed, and ``law_verdict`` checks what
is actually provable for the run's mode. In linear mode they coincide; in
norm mode a REFUTED ``verdict`` marks a place where definition and proof
disagree.
"""

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from itertools import repeat
from typing import Dict, List, Optional, Sequence, Tuple

from rich.console import Console
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn

from padic_ducci.arith.padic import format_rational, parse_rational
from padic_ducci.dynamics.orbit import (
    DucciInstance,
    IterationMode,
    OrbitLimits,
    OrbitReport,
    Outcome,
    run_orbit,
)
from padic_ducci.errors import InstanceMismatchError, SchemaError, ValidationError
from padic_ducci.harness.generators import GeneratorProfile, instance_for
from padic_ducci.spectral.analysis import (
    DEFAULT_MAX_ORDER,
    Claim,
    Prediction,
    SpectrumClass,
    predict_behavior,
)

logger = logging.getLogger(__name__)


class Verdict(Enum):
    CONFIRMED = "CONFIRMED"
    REFUTED = "REFUTED"
    UNRESOLVED = "UNRESOLVED"


@dataclass(frozen=True)
class SweepConfig:
    profiles: Tuple[GeneratorProfile, ...]
    instances_per_profile: int
    modes: Tuple[IterationMode, ...] = (IterationMode.LINEAR_MODE,)
    limits: OrbitLimits = field(default_factory=OrbitLimits)
    rng_seed: int = 0
    max_order: int = DEFAULT_MAX_ORDER
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "profiles", tuple(self.profiles))
        object.__setattr__(self, "modes", tuple(self.modes))
        if self.instances_per_profile < 1:
            raise ValidationError("instances_per_profile must be positive", field="instances_per_profile")
        if not self.modes:
            raise ValidationError("at least one mode is required", field="modes")
        if self.workers < 1:
            raise ValidationError("workers must be positive", field="workers")

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        if not isinstance(data, dict):
            raise SchemaError("sweep config must be a JSON object")
        try:
            limits_data = data.get("limits", {})
            if not isinstance(limits_data, dict):
                raise SchemaError("limits must be a JSON object", field="limits")
            limits = OrbitLimits(
                max_steps=int(limits_data.get("max_steps", OrbitLimits.max_steps)),
                max_stored_states=int(limits_data.get("max_stored_states", OrbitLimits.max_stored_states)),
                divergence_threshold=_optional_rational(limits_data, "divergence_threshold"),
                convergence_threshold=_optional_rational(limits_data, "convergence_threshold"),
                divergence_exponent=int(limits_data.get("divergence_exponent", OrbitLimits.divergence_exponent)),
                convergence_exponent=int(limits_data.get("convergence_exponent", OrbitLimits.convergence_exponent)),
            )
            return cls(
                profiles=tuple(GeneratorProfile.from_dict(p) for p in data.get("profiles", [])),
                instances_per_profile=int(data["instances_per_profile"]),
                modes=tuple(IterationMode.parse(m) for m in data.get("modes", ["linear"])),
                limits=limits,
                rng_seed=int(data.get("rng_seed", 0)),
                max_order=int(data.get("max_order", DEFAULT_MAX_ORDER)),
                workers=int(data.get("workers", 1)),
            )
        except KeyError as e:
            raise SchemaError(f"sweep config is missing {e.args[0]!r}", field=str(e.args[0]))
        except (TypeError, ValueError) as e:
            raise SchemaError(f"invalid sweep config: {e}")

    def to_dict(self) -> dict:
        limits = {
            "max_steps": self.limits.max_steps,
            "max_stored_states": self.limits.max_stored_states,
            "divergence_exponent": self.limits.divergence_exponent,
            "convergence_exponent": self.limits.convergence_exponent,
        }
        if self.limits.divergence_threshold is not None:
            limits["divergence_threshold"] = format_rational(self.limits.divergence_threshold)
        if self.limits.convergence_threshold is not None:
            limits["convergence_threshold"] = format_rational(self.limits.convergence_threshold)
        return {
            "profiles": [p.to_dict() for p in self.profiles],
            "instances_per_profile": self.instances_per_profile,
            "modes": [m.value for m in self.modes],
            "limits": limits,
            "rng_seed": self.rng_seed,
            "max_order": self.max_order,
            "workers": self.workers,
        }


def _optional_rational(data: dict, key: str):
    value = data.get(key)
    return None if value is None else parse_rational(str(value), field=key)


@dataclass(frozen=True)
class DiscrepancyRecord:
    instance_id: Optional[str]
    prediction: Prediction
    observed: OrbitReport
    verdict: Verdict
    law: Optional[Prediction] = None
    law_verdict: Optional[Verdict] = None
    profile: Optional[str] = None
    spectrum: Optional[SpectrumClass] = None
    instance: Optional[DucciInstance] = None

    def to_dict(self) -> dict:
        observed = self.observed.to_dict()
        trace = observed.pop("valuation_trace", [])
        observed.pop("instance_id", None)
        observed.pop("mode", None)
        if trace:
            observed["final_valuations"] = trace[-1]
        data = {"instance_id": self.instance_id}
        if self.profile is not None:
            data["profile"] = self.profile
        data["mode"] = self.prediction.mode.value
        if self.instance is not None:
            data["p"] = int(self.instance.p)
            data["matrix"] = self.instance.matrix.to_strings()
            data["seed"] = self.instance.seed.to_strings()
        if self.spectrum is not None:
            data["spectrum"] = self.spectrum.value
        data["prediction"] = self.prediction.to_dict()
        data["observed"] = observed
        data["verdict"] = self.verdict.value
        if self.law is not None:
            data["law"] = self.law.to_dict()
            data["law_verdict"] = self.law_verdict.value
        return data


@dataclass
class SweepResult:
    config: SweepConfig
    records: List[DiscrepancyRecord]
    summary: Dict[Tuple[int, IterationMode], Counter]

    def summary_rows(self) -> List[dict]:
        rows = []
        for (profile_index, mode), counts in self.summary.items():
            rows.append(
                {
                    "profile": self.config.profiles[profile_index].label,
                    "mode": mode.value,
                    "confirmed": counts[Verdict.CONFIRMED],
                    "refuted": counts[Verdict.REFUTED],
                    "unresolved": counts[Verdict.UNRESOLVED],
                }
            )
        return rows


def judge(pred: Prediction, report: OrbitReport) -> Verdict:
    """The logic table: REFUTED only on logical contradiction"""
    outcome = report.outcome
    claim = pred.claim
    if outcome is Outcome.UNRESOLVED or claim in (Claim.INDETERMINATE, Claim.UNSPECIFIED):
        return Verdict.UNRESOLVED

    if claim is Claim.TERMINATES:
        if outcome in (Outcome.TERMINATED, Outcome.CONVERGED):
            return Verdict.CONFIRMED
        if outcome is Outcome.CYCLE:
            return Verdict.REFUTED
        return Verdict.UNRESOLVED

    if claim is Claim.DIAGONAL_LAW:
        if outcome is Outcome.CYCLE:
            ok = report.preperiod <= 1 and report.period in (1, 2)
            return Verdict.CONFIRMED if ok else Verdict.REFUTED
        if outcome is Outcome.TERMINATED:
            return Verdict.CONFIRMED if report.steps <= 1 else Verdict.REFUTED
        return Verdict.UNRESOLVED

    # the remaining claims are about nonzero seeds
    if outcome is Outcome.TERMINATED and report.steps == 0:
        return Verdict.UNRESOLVED

    if claim is Claim.NEVER_ZERO:
        if outcome is Outcome.TERMINATED:
            return Verdict.REFUTED
        if outcome is Outcome.CYCLE:
            return Verdict.CONFIRMED
        return Verdict.UNRESOLVED

    if claim is Claim.PERIODIC:
        if outcome is Outcome.CYCLE:
            divides = pred.period_bound is not None and pred.period_bound % report.period == 0
            return Verdict.CONFIRMED if divides else Verdict.REFUTED
        if outcome is Outcome.TERMINATED:
            return Verdict.REFUTED
        return Verdict.UNRESOLVED

    if claim is Claim.UNBOUNDED_GROWTH:
        if outcome is Outcome.NORM_DIVERGED:
            return Verdict.CONFIRMED
        if outcome in (Outcome.CYCLE, Outcome.TERMINATED):
            return Verdict.REFUTED
        return Verdict.UNRESOLVED

    return Verdict.UNRESOLVED


def compare_prediction(
    pred: Prediction,
    report: OrbitReport,
    law: Optional[Prediction] = None,
) -> DiscrepancyRecord:
    ids = {i for i in (pred.instance_id, report.instance_id) if i is not None}
    if law is not None and law.instance_id is not None:
        ids.add(law.instance_id)
    if len(ids) > 1:
        raise InstanceMismatchError(f"prediction and report refer to different instances: {sorted(ids)}", field="instance_id")
    return DiscrepancyRecord(
        instance_id=ids.pop() if ids else None,
        prediction=pred,
        observed=report,
        verdict=judge(pred, report),
        law=law,
        law_verdict=judge(law, report) if law is not None else None,
    )


def audit_records(records: Sequence[DiscrepancyRecord]) -> List[DiscrepancyRecord]:
    """Records whose stored verdicts disagree with the logic table"""
    bad = []
    for rec in records:
        if judge(rec.prediction, rec.observed) is not rec.verdict:
            bad.append(rec)
        elif rec.law is not None and judge(rec.law, rec.observed) is not rec.law_verdict:
            bad.append(rec)
    return bad


def evaluate_instance(
    inst: DucciInstance,
    modes: Sequence[IterationMode],
    limits: OrbitLimits,
    max_order: int = DEFAULT_MAX_ORDER,
    profile: Optional[str] = None,
) -> List[DiscrepancyRecord]:
    behavior = predict_behavior(inst.matrix, inst.p, max_order, seed=inst.seed, instance_id=inst.instance_id)
    records = []
    for mode in modes:
        run = replace(inst, mode=mode)
        report = run_orbit(run, limits)
        rec = compare_prediction(behavior.published_claim(mode), report, law=behavior.for_mode(mode))
        records.append(replace(rec, profile=profile, spectrum=behavior.spectrum, instance=run))
    return records


def _evaluate_slot(config: SweepConfig, profile_index: int, instance_index: int) -> List[DiscrepancyRecord]:
    profile = config.profiles[profile_index]
    inst = instance_for(profile, config.rng_seed, profile_index, instance_index)
    return evaluate_instance(inst, config.modes, config.limits, config.max_order, profile=profile.label)


def run_sweep(config: SweepConfig, show_progress: bool = False) -> SweepResult:
    """Evaluate every (profile, instance, mode); records come back in slot order"""
    slots = [
        (pi, ii)
        for pi in range(len(config.profiles))
        for ii in range(config.instances_per_profile)
    ]
    logger.info(
        "sweep: %d profiles x %d instances x %d modes, %d workers",
        len(config.profiles),
        config.instances_per_profile,
        len(config.modes),
        config.workers,
    )

    batches: List[List[DiscrepancyRecord]] = []
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TextColumn("{task.completed}/{task.total}"),
        console=Console(stderr=True),
        disable=not show_progress,
        transient=True,
    ) as progress:
        task = progress.add_task("Running sweep...", total=len(slots))
        if config.workers > 1 and len(slots) > 1:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                results = pool.map(
                    _evaluate_slot,
                    repeat(config),
                    [s[0] for s in slots],
                    [s[1] for s in slots],
                    chunksize=max(1, len(slots) // (config.workers * 4)),
                )
                for batch in results:
                    batches.append(batch)
                    progress.advance(task)
        else:
            for pi, ii in slots:
                batches.append(_evaluate_slot(config, pi, ii))
                progress.advance(task)

    records = [rec for batch in batches for rec in batch]
    summary: Dict[Tuple[int, IterationMode], Counter] = {
        (pi, mode): Counter() for pi in range(len(config.profiles)) for mode in config.modes
    }
    for (pi, _), batch in zip(slots, batches):
        for rec in batch:
            summary[(pi, rec.prediction.mode)][rec.verdict] += 1

    for (pi, mode), counts in summary.items():
        logger.info(
            "%s/%s: %d confirmed, %d refuted, %d unresolved",
            config.profiles[pi].label,
            mode.value,
            counts[Verdict.CONFIRMED],
            counts[Verdict.REFUTED],
            counts[Verdict.UNRESOLVED],
        )
    return SweepResult(config=config, records=records, summary=summary)
