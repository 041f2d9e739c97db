"""
Wong-Zakai simulation CLI command.
"""

from pathlib import Path
from typing import Optional

import typer
from pydantic import ValidationError as SchemaError

from wzbench import ValidationError
from wzbench.models import ExperimentConfig
from wzbench.wzsim import run_experiment

from .common import emit, exit_on_error, explicit_options, get_config, read_json

app = typer.Typer()


def load_experiment(path: Optional[Path]) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    try:
        return ExperimentConfig.model_validate(read_json(path))
    except SchemaError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise ValidationError(f"invalid experiment config at {where}: {first['msg']}") from e


@app.command("simulate")
def simulate(
    ctx: typer.Context,
    config_path: Optional[Path] = typer.Option(None, "--config", help="Experiment JSON file"),
    replicas: Optional[int] = typer.Option(None, min=1, help="Override the replica count"),
    output_csv: Optional[Path] = typer.Option(None, "--output-csv", help="Write the report rows here"),
) -> None:
    """Solve the renormalized and counterterm-free equations on shared shot noise for each ε."""
    config = get_config(ctx)
    with exit_on_error():
        experiment = load_experiment(config_path)
        if replicas is not None:
            experiment.replicas = replicas
        # --seed and --budget (or their WZBENCH_ variables) win over the experiment file
        given = explicit_options(ctx)
        if "seed" in given:
            experiment.seed = config.seed
        if "budget" in given:
            experiment.constants_budget = config.budget
        report = run_experiment(experiment, jobs=config.jobs)
    if output_csv is not None:
        output_csv.write_text(report.to_csv(), encoding="utf-8")
        typer.echo(f"Wrote {len(report.rows)} rows to {output_csv}", err=True)
    rows = report.to_dict()["rows"]
    emit(config, {**report.to_dict(), "experiment": experiment.model_dump()}, rows)
    typer.echo(report.note, err=True)
