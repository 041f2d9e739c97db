"""
Brute-force theorem verification CLI command.
"""

from typing import List

import typer

from wzbench.theorems import SUITES, verify_theorems

from .common import EXIT_FAIL, emit, exit_on_error, get_config

app = typer.Typer()


@app.command("verify-theorems")
def verify(
    ctx: typer.Context,
    suite: List[str] = typer.Option([], "--suite", help=f"Suite to run (repeatable): {', '.join(SUITES)}"),
    random_graphs: int = typer.Option(100, help="Seeded random elementary graphs"),
    max_p: int = typer.Option(3, help="Largest number of copies in contraction suites"),
) -> None:
    """Run the contraction, reduction, converse, equivalence, merging and tree suites."""
    config = get_config(ctx)
    with exit_on_error():
        report = verify_theorems(config.seed, random_graphs, suite or SUITES, tuple(range(2, max_p + 1)))
    rows = [s.to_dict() for s in report.suites]
    emit(config, report.to_dict(), rows, ["suite", "pass", "checked", "skipped"], report.to_table())
    if not report.passed:
        raise typer.Exit(EXIT_FAIL)
