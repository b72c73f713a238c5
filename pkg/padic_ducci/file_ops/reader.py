import json
from pathlib import Path
from typing import Any

from padic_ducci.arith.linalg import RationalMatrix, RationalVector
from padic_ducci.arith.padic import Prime, parse_rational
from padic_ducci.dynamics.orbit import DucciInstance, IterationMode
from padic_ducci.errors import ReportIOError, SchemaError
from padic_ducci.harness.sweep import SweepConfig

MAX_INPUT_BYTES = 10 * 1024 * 1024


def read_json_file(filepath) -> Any:
    """Read and decode a JSON file, mapping failures to ReportIOError/SchemaError"""
    path = Path(filepath)
    try:
        if not path.is_file():
            raise ReportIOError(f"file {filepath} does not exist", field="path")
        if path.stat().st_size > MAX_INPUT_BYTES:
            raise ReportIOError(f"file {filepath} is too large", field="path")
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ReportIOError(f"could not read {filepath}: {e}", field="path")

    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{filepath} is not valid JSON: {e.msg} at line {e.lineno}")


def _require(data: dict, key: str):
    if key not in data:
        raise SchemaError(f"missing field {key!r}", field=key)
    return data[key]


def instance_from_dict(data: dict) -> DucciInstance:
    if not isinstance(data, dict):
        raise SchemaError("instance must be a JSON object")

    p_raw = _require(data, "p")
    if isinstance(p_raw, bool) or not isinstance(p_raw, int):
        raise SchemaError("p must be an integer", field="p")
    p = Prime(p_raw)

    mode = IterationMode.parse(str(data.get("mode", "linear")))

    rows = _require(data, "matrix")
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise SchemaError("matrix must be an array of arrays", field="matrix")
    matrix = RationalMatrix(
        [parse_rational(v, field=f"matrix[{i}][{j}]") for j, v in enumerate(row)]
        for i, row in enumerate(rows)
    )

    seed_raw = _require(data, "seed")
    if not isinstance(seed_raw, list):
        raise SchemaError("seed must be an array", field="seed")
    seed = RationalVector(parse_rational(v, field=f"seed[{i}]") for i, v in enumerate(seed_raw))

    instance_id = data.get("instance_id")
    return DucciInstance(
        p=p,
        matrix=matrix,
        seed=seed,
        mode=mode,
        instance_id=str(instance_id) if instance_id is not None else None,
    )


def parse_instance_file(filepath) -> DucciInstance:
    """Load {"p", "mode", "matrix", "seed"} and validate every invariant"""
    return instance_from_dict(read_json_file(filepath))


def load_sweep_config(filepath) -> SweepConfig:
    return SweepConfig.from_dict(read_json_file(filepath))
