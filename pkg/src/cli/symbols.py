"""
Symbol, homogeneity and renormalization-map CLI command.
"""

from fractions import Fraction
from typing import Optional

import typer

from wzbench.exceptions import ValidationError
from wzbench.renormalization import (
    L_DOMAIN,
    N_MAPS,
    apply_L,
    counterterm_consistency,
    monotonicity_failures,
    nilpotency_failures,
    structure_identity_failures,
)
from wzbench.symbols import format_symbol, generate_W, homogeneity_table, name_of, sort_key

from .common import EXIT_FAIL, EXIT_USAGE, emit, exit_on_error, get_config

app = typer.Typer()

VIEWS = ("homogeneity", "l-table", "generate", "checks")


def _parse_cutoff(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ValidationError(f"invalid cutoff {text!r}") from e


@app.command("symbols")
def symbols(
    ctx: typer.Context,
    view: str = typer.Argument("homogeneity", help=f"One of: {', '.join(VIEWS)}"),
    cutoff: Optional[str] = typer.Option(None, help="Homogeneity cutoff for 'generate', e.g. 5/2"),
) -> None:
    """Homogeneity table, renormalization-map table, symbol generation, or the algebraic checks."""
    config = get_config(ctx)
    rows = []
    with exit_on_error():
        if view == "homogeneity":
            for name, tau, h in homogeneity_table():
                rows.append({"name": name, "symbol": format_symbol(tau), "homogeneity": str(h),
                             "value": h.evaluate(config.kappa)})
        elif view == "l-table":
            for tau in sorted(L_DOMAIN, key=sort_key):
                for i in range(1, N_MAPS + 1):
                    image = apply_L(i, tau)
                    if not image.is_zero():
                        rows.append({"map": f"L{i}", "symbol": name_of(tau) or format_symbol(tau), "image": repr(image)})
        elif view == "generate":
            chosen = generate_W(_parse_cutoff(cutoff)) if cutoff else generate_W()
            for tau in sorted(chosen, key=sort_key):
                rows.append({"symbol": format_symbol(tau), "name": name_of(tau) or ""})
        elif view == "checks":
            rows = [
                {"check": "nilpotency", "failures": len(nilpotency_failures())},
                {"check": "monotonicity", "failures": len(monotonicity_failures())},
                {"check": "structure-identity", "failures": len(structure_identity_failures())},
            ]
            for c in counterterm_consistency():
                if not c.agrees:
                    rows.append({
                        "check": f"counterterm {c.constant} ({c.symbol})",
                        "failures": 0,
                        "note": f"table gives {c.table_multiplier}, equation uses {c.equation_multiplier}",
                    })
        else:
            typer.echo(f"Error: unknown view {view!r}; expected one of {', '.join(VIEWS)}", err=True)
            raise typer.Exit(EXIT_USAGE)
    fieldnames = list(dict.fromkeys(k for r in rows for k in r))
    emit(config, {"view": view, "rows": rows}, rows, fieldnames)
    if view == "checks" and any(r["failures"] for r in rows):
        raise typer.Exit(EXIT_FAIL)
