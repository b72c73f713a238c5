import json
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

import typer

try:  # typer >= 0.26 vendors its own click; catch the exceptions it raises
    import typer._click.exceptions
    from typer import _click as click
except ImportError:
    import click
from rich.console import Console
from rich.table import Table

from padic_ducci.arith.linalg import char_poly
from padic_ducci.arith.padic import (
    Prime,
    format_rational,
    format_valuation,
    padic_abs,
    parse_rational,
    vp,
)
from padic_ducci.config.settings import ConfigManager
from padic_ducci.dynamics.orbit import Outcome, OrbitReport, run_classical, run_orbit
from padic_ducci.errors import EXIT_OK, EXIT_USAGE, DucciError
from padic_ducci.file_ops.reader import load_sweep_config, parse_instance_file
from padic_ducci.file_ops.writer import write_report
from padic_ducci.harness.sweep import compare_prediction, run_sweep
from padic_ducci.log import configure_logging
from padic_ducci.spectral.analysis import predict_behavior, spectral_report

app = typer.Typer(
    help="Exact p-adic Ducci dynamics: orbits, spectra and prediction sweeps",
    add_completion=False,
    no_args_is_help=True,
)
console = Console(soft_wrap=True, highlight=False, emoji=False)
err_console = Console(stderr=True, soft_wrap=True, highlight=False, emoji=False)

state = {"json": False, "config": None}


def get_config() -> ConfigManager:
    if state["config"] is None:
        state["config"] = ConfigManager()
    return state["config"]


def emit_json(data: dict):
    console.print(json.dumps(data, indent=2), markup=False)


def emit_text(text: str):
    console.print(text, markup=False)


@app.callback()
def main_callback(
    json_output: bool = typer.Option(False, "--json", help="Force JSON output for every command"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging on stderr"),
):
    """Exact p-adic Ducci dynamics"""
    state["json"] = json_output
    state["config"] = None
    configure_logging(verbose)


@app.command("abs")
def abs_command(
    x: str = typer.Argument(..., help="Rational a/b or a"),
    p: int = typer.Option(..., "--p", help="Prime"),
):
    """Print the p-adic absolute value |x|_p"""
    prime = Prime(p)
    value = parse_rational(x, field="x")
    result = padic_abs(value, prime)
    if state["json"]:
        emit_json(
            {
                "x": format_rational(value),
                "p": int(prime),
                "valuation": format_valuation(vp(value, prime)),
                "abs": format_rational(result),
            }
        )
    else:
        emit_text(format_rational(result))


@app.command()
def orbit(
    instance: Path = typer.Option(..., "--instance", help="Instance JSON file"),
    max_steps: Optional[int] = typer.Option(None, "--max-steps", help="Step budget"),
    threshold: Optional[str] = typer.Option(None, "--threshold", help="Divergence threshold (rational)"),
    max_states: Optional[int] = typer.Option(None, "--max-states", help="Stored-state budget"),
    trace: bool = typer.Option(False, "--trace", help="Include the visited states"),
):
    """Run an orbit and print its report"""
    config = get_config()
    inst = parse_instance_file(instance)
    limits = config.orbit_limits(max_steps=max_steps, max_stored_states=max_states)
    if threshold is not None:
        limits = replace(limits, divergence_threshold=parse_rational(threshold, field="threshold"))
    report = run_orbit(inst, limits, record_states=trace)
    emit_json(report.to_dict(trace_cap=config.get("output.trace_cap")))


@app.command()
def spectrum(
    instance: Path = typer.Option(..., "--instance", help="Instance JSON file"),
    max_order: Optional[int] = typer.Option(None, "--max-order", help="Largest root-of-unity order tried"),
):
    """Newton polygon, eigenvalue valuations and spectrum class"""
    config = get_config()
    inst = parse_instance_file(instance)
    order = max_order if max_order is not None else config.get("spectral.max_order")
    report = spectral_report(inst.matrix, inst.p, order, seed=inst.seed, instance_id=inst.instance_id)
    data = {"p": int(inst.p), "n": inst.n, "char_poly": char_poly(inst.matrix).to_strings()}
    data.update(report.to_dict())
    emit_json(data)


@app.command()
def predict(
    instance: Path = typer.Option(..., "--instance", help="Instance JSON file"),
    check: bool = typer.Option(False, "--check", help="Run the orbit and judge the prediction"),
    max_order: Optional[int] = typer.Option(None, "--max-order", help="Largest root-of-unity order tried"),
    max_steps: Optional[int] = typer.Option(None, "--max-steps", help="Step budget for --check"),
    threshold: Optional[str] = typer.Option(None, "--threshold", help="Divergence threshold for --check"),
):
    """Predict orbit behaviour from the spectrum"""
    config = get_config()
    inst = parse_instance_file(instance)
    order = max_order if max_order is not None else config.get("spectral.max_order")
    behavior = predict_behavior(inst.matrix, inst.p, order, seed=inst.seed, instance_id=inst.instance_id)
    claim = behavior.published_claim(inst.mode)
    law = behavior.for_mode(inst.mode)

    data = {
        "mode": inst.mode.value,
        "spectrum": behavior.spectrum.value,
        "prediction": claim.to_dict(),
        "law": law.to_dict(),
    }
    if inst.instance_id is not None:
        data["instance_id"] = inst.instance_id

    if check:
        limits = config.orbit_limits(max_steps=max_steps)
        if threshold is not None:
            limits = replace(limits, divergence_threshold=parse_rational(threshold, field="threshold"))
        report = run_orbit(inst, limits)
        record = compare_prediction(claim, report, law=law)
        data["observed"] = report.outcome_dict()
        data["steps"] = report.steps
        data["verdict"] = record.verdict.value
        data["law_verdict"] = record.law_verdict.value
    emit_json(data)


@app.command()
def sweep(
    config_path: Path = typer.Option(..., "--config", help="Sweep config JSON file"),
    out: Path = typer.Option(..., "--out", help="Report directory"),
    workers: Optional[int] = typer.Option(None, "--workers", help="Worker processes"),
):
    """Generate instances, compare predictions with orbits, write reports"""
    config = get_config()
    sweep_config = load_sweep_config(config_path)
    if workers is None and sweep_config.workers == 1:
        workers = config.get("sweep.workers")
    if workers is not None:
        sweep_config = replace(sweep_config, workers=workers)

    result = run_sweep(sweep_config, show_progress=err_console.is_terminal)
    paths = write_report(out, result)
    rows = result.summary_rows()

    table = Table(title="Sweep summary")
    for column, style in (("profile", "cyan"), ("mode", "magenta"), ("confirmed", "green"), ("refuted", "red"), ("unresolved", "yellow")):
        table.add_column(column, style=style)
    for row in rows:
        table.add_row(*(str(row[c]) for c in ("profile", "mode", "confirmed", "refuted", "unresolved")))
    err_console.print(table)

    emit_json({"records": str(paths["records"]), "summary": str(paths["summary"]), "counts": rows})


def _classical_summary(report: OrbitReport) -> str:
    if report.outcome is Outcome.TERMINATED:
        return f"terminated at step {report.steps}"
    if report.outcome is Outcome.CYCLE:
        return f"cycle with preperiod {report.preperiod} and period {report.period}"
    return f"unresolved after {report.steps} steps"


@app.command()
def classical(
    values: List[int] = typer.Argument(..., help="Four nonnegative integers"),
    trace: bool = typer.Option(False, "--trace", help="Print every iterate"),
    max_steps: int = typer.Option(1000, "--max-steps", help="Step budget"),
):
    """Orbit of the classical four-number Ducci map"""
    config = get_config()
    cap = config.get("output.trace_cap")
    report = run_classical(values, max_steps=max_steps, record_states=trace)
    if state["json"]:
        emit_json(report.to_dict(trace_cap=cap))
        return

    if trace:
        iterates = report.states[1:]
        for s in iterates[:cap]:
            emit_text(" ".join(str(v) for v in s))
        if len(iterates) > cap:
            emit_text(f"... ({len(iterates) - cap} more steps)")
    emit_text(_classical_summary(report))


@app.command()
def status():
    """Show the effective configuration"""
    config = get_config()
    if state["json"]:
        emit_json({section: config.get(section) for section in ("orbit", "spectral", "sweep", "output")})
    else:
        config.show_current_config(console)


def run(argv: Optional[List[str]] = None) -> int:
    """Console entry point; maps errors to exit codes"""
    try:
        result = app(args=argv, prog_name="padic-ducci", standalone_mode=False)
    except click.exceptions.UsageError as e:
        err_console.print(f"error: {e.format_message()}", markup=False)
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except DucciError as e:
        err_console.print(e.diagnostic(), markup=False)
        return e.exit_code
    return result if isinstance(result, int) else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(run())
