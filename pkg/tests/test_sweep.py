import csv
import json
from dataclasses import replace
from fractions import Fraction

import pytest

from padic_ducci.arith.linalg import RationalMatrix, RationalVector
from padic_ducci.dynamics.orbit import DucciInstance, IterationMode, OrbitLimits, OrbitReport, Outcome
from padic_ducci.errors import InstanceMismatchError, SchemaError, ValidationError
from padic_ducci.file_ops.writer import records_jsonl, write_report
from padic_ducci.harness.generators import GeneratorProfile, ProfileKind
from padic_ducci.harness.sweep import (
    SweepConfig,
    Verdict,
    audit_records,
    compare_prediction,
    evaluate_instance,
    judge,
    run_sweep,
)
from padic_ducci.spectral.analysis import Claim, Prediction

NORM = IterationMode.NORM_MODE
LINEAR = IterationMode.LINEAR_MODE


def terminated(step):
    return OrbitReport(outcome=Outcome.TERMINATED, steps=step)


def cycle(preperiod, period):
    return OrbitReport(outcome=Outcome.CYCLE, steps=preperiod + period, preperiod=preperiod, period=period)


def outcome(kind, steps=10):
    return OrbitReport(outcome=kind, steps=steps)


def claim(kind, bound=None):
    return Prediction(kind, "test", period_bound=bound, certified=bound is not None)


@pytest.mark.parametrize(
    "pred,report,expected",
    [
        (claim(Claim.TERMINATES), terminated(5), Verdict.CONFIRMED),
        (claim(Claim.TERMINATES), outcome(Outcome.CONVERGED), Verdict.CONFIRMED),
        (claim(Claim.TERMINATES), cycle(0, 2), Verdict.REFUTED),
        (claim(Claim.TERMINATES), outcome(Outcome.NORM_DIVERGED), Verdict.UNRESOLVED),
        (claim(Claim.TERMINATES), outcome(Outcome.UNRESOLVED), Verdict.UNRESOLVED),
        (claim(Claim.NEVER_ZERO), cycle(3, 1), Verdict.CONFIRMED),
        (claim(Claim.NEVER_ZERO), terminated(4), Verdict.REFUTED),
        (claim(Claim.NEVER_ZERO), terminated(0), Verdict.UNRESOLVED),
        (claim(Claim.PERIODIC, 4), cycle(0, 2), Verdict.CONFIRMED),
        (claim(Claim.PERIODIC, 4), cycle(0, 3), Verdict.REFUTED),
        (claim(Claim.PERIODIC, 4), terminated(2), Verdict.REFUTED),
        (claim(Claim.PERIODIC, 4), outcome(Outcome.UNRESOLVED), Verdict.UNRESOLVED),
        (claim(Claim.UNBOUNDED_GROWTH), outcome(Outcome.NORM_DIVERGED, 51), Verdict.CONFIRMED),
        (claim(Claim.UNBOUNDED_GROWTH), cycle(1, 2), Verdict.REFUTED),
        (claim(Claim.UNBOUNDED_GROWTH), terminated(3), Verdict.REFUTED),
        (claim(Claim.UNBOUNDED_GROWTH), outcome(Outcome.CONVERGED), Verdict.UNRESOLVED),
        (claim(Claim.DIAGONAL_LAW), cycle(1, 2), Verdict.CONFIRMED),
        (claim(Claim.DIAGONAL_LAW), cycle(0, 1), Verdict.CONFIRMED),
        (claim(Claim.DIAGONAL_LAW), cycle(2, 2), Verdict.REFUTED),
        (claim(Claim.DIAGONAL_LAW), cycle(0, 3), Verdict.REFUTED),
        (claim(Claim.DIAGONAL_LAW), terminated(0), Verdict.CONFIRMED),
        (claim(Claim.DIAGONAL_LAW), terminated(2), Verdict.REFUTED),
        (claim(Claim.INDETERMINATE), terminated(3), Verdict.UNRESOLVED),
        (claim(Claim.UNSPECIFIED), cycle(0, 2), Verdict.UNRESOLVED),
    ],
)
def test_judge(pred, report, expected):
    assert judge(pred, report) is expected


def test_compare_prediction_examples():
    assert compare_prediction(claim(Claim.TERMINATES), terminated(5)).verdict is Verdict.CONFIRMED
    assert compare_prediction(claim(Claim.TERMINATES), cycle(0, 2)).verdict is Verdict.REFUTED
    assert compare_prediction(claim(Claim.PERIODIC, 4), cycle(0, 2)).verdict is Verdict.CONFIRMED


def test_compare_prediction_checks_instance_ids():
    pred = replace(claim(Claim.TERMINATES), instance_id="a")
    report = replace(terminated(1), instance_id="b")
    with pytest.raises(InstanceMismatchError):
        compare_prediction(pred, report)
    assert compare_prediction(pred, replace(report, instance_id="a")).instance_id == "a"


def contractive_diagonal(seed, mode):
    return DucciInstance(
        p=3,
        matrix=RationalMatrix.diagonal([3, 9]),
        seed=RationalVector(seed),
        mode=mode,
        instance_id="diag",
    )


def test_norm_mode_exposes_published_claim():
    records = evaluate_instance(
        contractive_diagonal([1, 2], NORM), [LINEAR, NORM], OrbitLimits()
    )
    linear, norm = records
    assert linear.prediction.claim is Claim.TERMINATES
    assert linear.verdict is Verdict.CONFIRMED
    assert linear.law_verdict is Verdict.CONFIRMED
    assert norm.prediction.claim is Claim.TERMINATES
    assert norm.observed.outcome is Outcome.CYCLE
    assert norm.verdict is Verdict.REFUTED
    assert norm.law.claim is Claim.DIAGONAL_LAW
    assert norm.law_verdict is Verdict.CONFIRMED


def test_record_to_dict():
    (record,) = evaluate_instance(contractive_diagonal([1, 1], NORM), [NORM], OrbitLimits(), profile="hand")
    data = record.to_dict()
    assert data["instance_id"] == "diag"
    assert data["profile"] == "hand"
    assert data["mode"] == "norm"
    assert data["p"] == 3
    assert data["matrix"] == [["3", "0"], ["0", "9"]]
    assert data["seed"] == ["1", "1"]
    assert data["spectrum"] == "contractive"
    assert data["prediction"]["paper_clause"] == "contractive-spectrum-terminates"
    assert data["observed"]["outcome"] == {"kind": "cycle", "preperiod": 0, "period": 2}
    assert "valuation_trace" not in data["observed"]
    assert data["verdict"] == "REFUTED"
    assert data["law_verdict"] == "CONFIRMED"


def test_audit_catches_tampered_verdicts():
    records = evaluate_instance(contractive_diagonal([1, 2], NORM), [LINEAR, NORM], OrbitLimits())
    assert audit_records(records) == []
    tampered = replace(records[1], verdict=Verdict.CONFIRMED)
    assert audit_records([records[0], tampered]) == [tampered]


def small_config(**overrides):
    values = dict(
        profiles=(
            GeneratorProfile(ProfileKind.CONTRACTIVE_ENTRIES, 2, 3),
            GeneratorProfile(ProfileKind.PERMUTATION, 3, 5),
            GeneratorProfile(ProfileKind.DIAGONAL_RANDOM, 2, 2),
        ),
        instances_per_profile=5,
        modes=(LINEAR, NORM),
        limits=OrbitLimits(max_steps=200),
        rng_seed=123,
    )
    values.update(overrides)
    return SweepConfig(**values)


def test_run_sweep_records_in_slot_order():
    result = run_sweep(small_config())
    assert len(result.records) == 3 * 5 * 2
    ids = [rec.instance_id for rec in result.records[::2]]
    assert ids[:2] == ["contractive_entries-n2-p3-00000", "contractive_entries-n2-p3-00001"]
    assert [rec.prediction.mode for rec in result.records[:2]] == [LINEAR, NORM]
    assert audit_records(result.records) == []


def test_contractive_linear_runs_are_confirmed():
    result = run_sweep(small_config(modes=(LINEAR,)))
    contractive = [r for r in result.records if r.profile.startswith("contractive_entries")]
    assert contractive
    assert all(r.verdict is Verdict.CONFIRMED for r in contractive)


def test_summary_rows():
    result = run_sweep(small_config())
    rows = result.summary_rows()
    assert len(rows) == 6
    for row in rows:
        assert row["confirmed"] + row["refuted"] + row["unresolved"] == 5


def test_empty_sweep():
    result = run_sweep(small_config(profiles=()))
    assert result.records == []
    assert result.summary_rows() == []


def test_sweep_is_deterministic():
    assert records_jsonl(run_sweep(small_config())) == records_jsonl(run_sweep(small_config()))


def test_sweep_independent_of_worker_count():
    serial = records_jsonl(run_sweep(small_config(workers=1)))
    parallel = records_jsonl(run_sweep(small_config(workers=2)))
    assert serial == parallel


def test_write_report(tmp_path):
    result = run_sweep(small_config())
    paths = write_report(tmp_path / "out", result)
    lines = paths["records"].read_text(encoding="utf-8").splitlines()
    assert len(lines) == len(result.records)
    assert json.loads(lines[0])["instance_id"] == "contractive_entries-n2-p3-00000"
    with open(paths["summary"], newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    assert [r["profile"] for r in rows[:2]] == ["contractive_entries-n2-p3", "contractive_entries-n2-p3"]
    assert set(rows[0]) == {"profile", "mode", "confirmed", "refuted", "unresolved"}


def test_sweep_config_dict_roundtrip():
    config = small_config(limits=OrbitLimits(max_steps=50, divergence_threshold=Fraction(1000)))
    assert SweepConfig.from_dict(config.to_dict()) == config


def test_sweep_config_validation():
    with pytest.raises(SchemaError):
        SweepConfig.from_dict({"profiles": []})
    with pytest.raises(SchemaError):
        SweepConfig.from_dict({"instances_per_profile": 1, "modes": ["sideways"]})
    with pytest.raises(SchemaError) as excinfo:
        SweepConfig.from_dict({"instances_per_profile": 1, "limits": 5})
    assert excinfo.value.field == "limits"
    with pytest.raises(SchemaError) as excinfo:
        SweepConfig.from_dict({"instances_per_profile": 1, "profiles": [5]})
    assert excinfo.value.field == "profiles"
    with pytest.raises(ValidationError):
        small_config(instances_per_profile=0)
    with pytest.raises(ValidationError):
        small_config(modes=())
