"""Command line entry points: qdt run / serve / validate-instance / report."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import problems
from .engine import load_config, run_tree
from .errors import QdtError, QueryAborted
from .queries import AutoSource, InteractiveSource, ScriptedSource


@click.group()
def main():
    """Guided pipeline from a problem instance to a solved, interpreted run."""


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="config.json location (default: ./config.json if present)")
@click.option("--answers", "answers_path", type=click.Path(exists=True),
              default=None, help="scripted answers file (query id -> raw text)")
@click.option("--auto", is_flag=True, help="take every recommendation, ask nothing")
@click.option("--seed", type=int, default=None, help="seed for full reproducibility")
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="output directory (default from config, ./runs)")
def run(config_path, answers_path, auto, seed, out_dir):
    """Execute one decision-tree run."""
    config = load_config(config_path or "config.json")
    if auto:
        config.automation = "auto"
    if seed is not None:
        config.seed = seed
    if out_dir is not None:
        config.output_dir = out_dir

    answers_path = answers_path or config.answers_file
    if answers_path is not None:
        config.answers_file = str(answers_path)
        source = ScriptedSource(json.loads(Path(answers_path).read_text()))
    elif config.automation == "auto":
        source = AutoSource()
    else:
        source = InteractiveSource()

    try:
        artifacts = run_tree(config, source)
    except QueryAborted:
        click.echo("run aborted")
        sys.exit(130)
    except QdtError as exc:
        click.echo(f"run failed: {exc}", err=True)
        sys.exit(1)

    result = artifacts.result
    click.echo(f"run {artifacts.run_id} finished")
    click.echo(f"  problem:   {result.get('problem_class')}")
    click.echo(f"  solution:  {result.get('solution')}")
    click.echo(f"  objective: {result.get('objective')}")
    click.echo(f"  solver:    {result.get('solver_name')}"
               f" (raw energy {result.get('raw_energy')})")
    for path in artifacts.files_written:
        click.echo(f"  wrote {path}")


@main.command()
@click.option("--port", type=int, default=8087, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--ui", "ui_dir", type=click.Path(), default=None,
              help="static wizard UI directory (default: ./frontend/dist if present)")
def serve(port, host, config_path, ui_dir):
    """Serve the session API (and the wizard UI when available)."""
    import uvicorn

    from .service import create_app

    config = load_config(config_path or "config.json")
    if ui_dir is None and Path("frontend/dist").is_dir():
        ui_dir = "frontend/dist"
    app = create_app(config, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command("validate-instance")
@click.argument("file", type=click.Path(exists=True))
def validate_instance(file):
    """Check that FILE is a loadable problem-instance record."""
    try:
        record = json.loads(Path(file).read_text())
        instance = problems.from_record(record)
    except (json.JSONDecodeError, QdtError, KeyError) as exc:
        click.echo(f"invalid instance: {exc}", err=True)
        sys.exit(1)
    click.echo(f"ok: {instance!r}")


@main.command()
@click.argument("run_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="where to put report files (default: the run directory)")
def report(run_dir, out_dir):
    """Render figures and history.csv for a finished run."""
    from .report import generate_report

    try:
        written = generate_report(run_dir, out_dir)
    except FileNotFoundError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    if not written:
        click.echo("nothing to report (no history, no drawable solution)")
    for path in written:
        click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
