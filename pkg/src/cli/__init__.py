#!/usr/bin/env python3
"""
Command-line interface for the wzbench workbench.

Power-counting checks on labeled hypergraphs, Wick contractions, brute-force
theorem suites, renormalization constants, scaling fits, cumulant oracles
and the Wong-Zakai simulation contrast.
"""

import logging
import sys
from pathlib import Path
from typing import Optional

import typer
from pydantic import ValidationError as SchemaError

# Load environment variables from .env file
try:
    from dotenv import load_dotenv

    load_dotenv()
except ImportError:
    pass  # dotenv not available, continue without it

# Add the parent directory to Python path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from wzbench import BenchConfig
from wzbench.models.config import DEFAULT_BUDGET

# Subcommand imports - import after path setup
from . import constants, cumulants, graphs, scaling, simulate, symbols, theorems
from .common import EXIT_USAGE

app = typer.Typer()


# Global state for subcommands
class GlobalState:
    config: Optional[BenchConfig] = None


state = GlobalState()


@app.callback()
def cli_callback(
    ctx: typer.Context,
    s: int = typer.Option(3, "--s", envvar="WZBENCH_S", help="Scaling norm |s|"),
    kappa: float = typer.Option(0.01, envvar="WZBENCH_KAPPA", help="Numeric κ for display"),
    budget: int = typer.Option(DEFAULT_BUDGET, envvar="WZBENCH_BUDGET", help="Monte-Carlo sample budget"),
    seed: int = typer.Option(0, envvar="WZBENCH_SEED", help="Master seed"),
    jobs: int = typer.Option(1, envvar="WZBENCH_JOBS", help="Worker cap"),
    output_format: str = typer.Option("table", "--format", envvar="WZBENCH_FORMAT", help="json, csv or table"),
    violation_limit: int = typer.Option(
        1000, envvar="WZBENCH_VIOLATION_LIMIT", help="Violations kept per report"
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging to stderr"),
) -> None:
    """wzbench: power counting, moment bounds and Wong-Zakai shot-noise experiments.

    Exit codes: 0 pass, 1 check failed, 2 invalid input.
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = BenchConfig(
            s=s,
            kappa=kappa,
            budget=budget,
            seed=seed,
            jobs=jobs,
            format=output_format,
            violation_limit=violation_limit,
        )
    except SchemaError as e:
        first = e.errors()[0]
        typer.echo(f"Error: invalid --{str(first['loc'][0]).replace('_', '-')}: {first['msg']}", err=True)
        raise typer.Exit(EXIT_USAGE)
    state.config = config
    ctx.obj = state


for module in (graphs, theorems, constants, scaling, cumulants, simulate, symbols):
    app.registered_commands.extend(module.app.registered_commands)


def main() -> None:
    app()


if __name__ == "__main__":
    main()
