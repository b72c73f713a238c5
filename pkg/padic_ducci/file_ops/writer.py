import csv
import json
from pathlib import Path
from typing import Iterable

from padic_ducci.dynamics.orbit import DucciInstance
from padic_ducci.errors import ReportIOError
from padic_ducci.harness.sweep import SweepResult

RECORDS_NAME = "records.jsonl"
SUMMARY_NAME = "summary.csv"
SUMMARY_FIELDS = ["profile", "mode", "confirmed", "refuted", "unresolved"]


def dumps(data) -> str:
    """Stable JSON encoding used for every report"""
    return json.dumps(data, separators=(", ", ": "), ensure_ascii=False)


def write_file_content(filepath, content: str) -> Path:
    """Write text, creating parent directories"""
    path = Path(filepath)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(content)
    except OSError as e:
        raise ReportIOError(f"could not write {filepath}: {e}", field="out")
    return path


def instance_to_dict(inst: DucciInstance) -> dict:
    data = {
        "p": int(inst.p),
        "mode": inst.mode.value,
        "matrix": inst.matrix.to_strings(),
        "seed": inst.seed.to_strings(),
    }
    if inst.instance_id is not None:
        data["instance_id"] = inst.instance_id
    return data


def write_instance_file(filepath, inst: DucciInstance) -> Path:
    return write_file_content(filepath, json.dumps(instance_to_dict(inst), indent=2) + "\n")


def records_jsonl(result: SweepResult) -> str:
    return "".join(dumps(rec.to_dict()) + "\n" for rec in result.records)


def _write_rows(path: Path, rows: Iterable[dict]):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=SUMMARY_FIELDS, lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
    except OSError as e:
        raise ReportIOError(f"could not write {path}: {e}", field="out")


def write_report(out_dir, result: SweepResult) -> dict:
    """records.jsonl (one record per line, slot order) plus summary.csv"""
    out = Path(out_dir)
    if out.exists() and not out.is_dir():
        raise ReportIOError(f"{out_dir} exists and is not a directory", field="out")
    records_path = write_file_content(out / RECORDS_NAME, records_jsonl(result))
    summary_path = out / SUMMARY_NAME
    _write_rows(summary_path, result.summary_rows())
    return {"records": records_path, "summary": summary_path}
