"""
Graph-related CLI commands: power-counting checks and Wick contractions.
"""

from pathlib import Path
from typing import List, Optional

import typer

from wzbench.graphs import (
    ElementaryGraph,
    Mode,
    check_assumption,
    enumerate_wick_partitions,
    save_graph,
    wick_contract,
)

from .common import EXIT_FAIL, EXIT_USAGE, emit, exit_on_error, get_config, read_graph

app = typer.Typer()


@app.command("check-graph")
def check_graph(
    ctx: typer.Context,
    path: Optional[Path] = typer.Argument(None, help="Graph JSON file"),
    builtin: Optional[str] = typer.Option(None, "--builtin", help="Library graph name, e.g. Xi2:1"),
    mode: str = typer.Option("auto", help="big, elementary, or auto (elementary for elementary graphs)"),
    normalize_bad_chains: bool = typer.Option(False, help="Integrate out noise vertices between two (|s|, -1) edges first"),
) -> None:
    """Check the power-counting assumption on a graph; exit 1 on violations."""
    config = get_config(ctx)
    with exit_on_error():
        graph = read_graph(path, builtin, config.s)
        if mode == "auto":
            mode = Mode.ELEMENTARY.value if isinstance(graph, ElementaryGraph) else Mode.BIG.value
        if mode not in (Mode.BIG.value, Mode.ELEMENTARY.value):
            typer.echo(f"Error: unknown mode {mode!r}", err=True)
            raise typer.Exit(EXIT_USAGE)
        report = check_assumption(
            graph,
            mode,
            jobs=config.jobs,
            violation_limit=config.violation_limit,
            normalize_bad_chains=normalize_bad_chains,
        )
    rows = [v.to_dict() for v in report.violations]
    emit(config, report.to_dict(), rows, ["item", "subset", "lhs", "required", "rhs"], report.to_table())
    if not report.passed:
        raise typer.Exit(EXIT_FAIL)


@app.command("contract")
def contract(
    ctx: typer.Context,
    path: Optional[Path] = typer.Argument(None, help="Elementary graph JSON file"),
    builtin: Optional[str] = typer.Option(None, "--builtin", help="Library graph name, e.g. Xi2:1"),
    p: int = typer.Option(2, "--p", min=2, help="Number of copies"),
    reduce: bool = typer.Option(True, "--reduce/--no-reduce", help="Remove bad chains"),
    check: bool = typer.Option(True, "--check/--no-check", help="Run the big check on every contraction"),
    output_dir: Optional[Path] = typer.Option(None, help="Write each contraction as JSON into this directory"),
) -> None:
    """Enumerate the p-fold Wick contractions of an elementary graph."""
    config = get_config(ctx)
    rows: List[dict] = []
    with exit_on_error():
        graph = read_graph(path, builtin, config.s)
        if not isinstance(graph, ElementaryGraph):
            typer.echo("Error: contractions need an elementary graph (set 'special' and 'external')", err=True)
            raise typer.Exit(EXIT_USAGE)
        graph.validate()
        for k, pi in enumerate(enumerate_wick_partitions(graph.external, p)):
            result = wick_contract(graph, p, pi, reduce=reduce)
            row = {
                "index": k,
                "partition": str(pi) or "(empty)",
                "vertices": len(result.graph.vertices),
                "edges": len(result.graph.all_edges()),
                "bad_chains": len(result.pair_chains),
                "alpha": str(result.graph.alpha_exponent()),
            }
            if check:
                row["pass"] = check_assumption(result.graph, Mode.BIG, jobs=config.jobs).passed
            if output_dir is not None:
                output_dir.mkdir(parents=True, exist_ok=True)
                save_graph(result.graph, output_dir / f"contraction_{k:04d}.json")
            rows.append(row)
    failed = [r for r in rows if r.get("pass") is False]
    payload = {"graph": graph.name, "p": p, "reduced": reduce, "contractions": rows, "pass": not failed}
    emit(config, payload, rows)
    if failed:
        raise typer.Exit(EXIT_FAIL)
