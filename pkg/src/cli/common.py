"""
Shared helpers for the CLI commands: configuration, error mapping and output.
"""

import csv
import io
import json
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Set

import typer

try:  # newer typer vendors its own click; its contexts report that copy's enum
    from typer._click.core import ParameterSource
except ImportError:
    from click.core import ParameterSource
from pydantic import ValidationError as SchemaError

# Add the parent directory to Python path for imports
parent_dir = Path(__file__).parent.parent
sys.path.insert(0, str(parent_dir))

from wzbench import BenchConfig, ValidationError, WZBenchError
from wzbench.exceptions import ParseError, ResourceLimitError
from wzbench.graphs import builtin_graph_library, parse_graph
from wzbench.graphs.io import AnyGraph

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def get_config(ctx: typer.Context) -> BenchConfig:
    """BenchConfig resolved by the global callback."""
    state = ctx.obj
    if state is None or state.config is None:
        return BenchConfig.from_env()
    return state.config


def explicit_options(ctx: typer.Context) -> Set[str]:
    """Global options given on the command line or through a WZBENCH_* variable."""
    root = ctx.find_root()
    return {
        name
        for name in root.params
        if root.get_parameter_source(name) in (ParameterSource.COMMANDLINE, ParameterSource.ENVIRONMENT)
    }


@contextmanager
def exit_on_error() -> Iterator[None]:
    """Map library errors to exit codes: invalid input → 2, other failures → 1."""
    try:
        yield
    except (ValidationError, ResourceLimitError, SchemaError) as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(EXIT_USAGE)
    except WZBenchError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(EXIT_FAIL)


def read_graph(path: Optional[Path], builtin: Optional[str], s: int) -> AnyGraph:
    """Graph from a JSON file (``s`` fills a missing scaling norm) or from the built-in library."""
    if builtin:
        return builtin_graph_library().find(builtin)
    if path is None:
        raise ValidationError("give a graph file or --builtin NAME")
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON in {path} at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if isinstance(raw, dict):
        raw.setdefault("s", s)
    return parse_graph(raw)


def read_json(path: Path) -> Dict[str, Any]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON in {path} at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise ParseError(f"{path} must contain a JSON object")
    return data


def parse_floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise ValidationError(f"expected a comma-separated list of numbers, got {text!r}") from e


def format_json_output(data: Any, pretty: bool = True) -> str:
    if pretty:
        return json.dumps(data, indent=2, default=str)
    return json.dumps(data, default=str)


def format_csv(rows: Sequence[Dict[str, Any]], fieldnames: Optional[Sequence[str]] = None) -> str:
    buffer = io.StringIO()
    names = list(fieldnames or (rows[0].keys() if rows else []))
    writer = csv.DictWriter(buffer, fieldnames=names, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue().rstrip("\n")


def format_table(rows: Sequence[Dict[str, Any]], fieldnames: Optional[Sequence[str]] = None) -> str:
    names = list(fieldnames or (rows[0].keys() if rows else []))

    def cell(v: Any) -> str:
        return f"{v:.6g}" if isinstance(v, float) else str(v)

    widths = {n: max([len(n)] + [len(cell(r.get(n, ""))) for r in rows]) for n in names}
    lines = ["  ".join(n.ljust(widths[n]) for n in names)]
    lines.extend("  ".join(cell(r.get(n, "")).ljust(widths[n]) for n in names) for r in rows)
    return "\n".join(lines)


def emit(
    config: BenchConfig,
    payload: Dict[str, Any],
    rows: Optional[Sequence[Dict[str, Any]]] = None,
    fieldnames: Optional[Sequence[str]] = None,
    table: Optional[str] = None,
) -> None:
    """Print ``payload`` as JSON, ``rows`` as CSV, or ``table`` (default: rows as a table)."""
    if config.format == "json":
        typer.echo(format_json_output({**payload, "config": config.model_dump()}))
    elif config.format == "csv":
        typer.echo(format_csv(rows or [], fieldnames))
    else:
        typer.echo(table if table is not None else format_table(rows or [], fieldnames))
