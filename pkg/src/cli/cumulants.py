"""
Cumulant oracle CLI command.
"""

from pathlib import Path
from typing import List, Optional

import numpy as np
import typer

from wzbench.cumulants import DiscreteFieldModel, diagram_formula_mismatches, roundtrip_mismatches
from wzbench.numerics.shot_noise import sampling_oracle

from .common import EXIT_FAIL, emit, exit_on_error, get_config
from .constants import load_model_spec

app = typer.Typer()


@app.command("cumulants")
def cumulants(
    ctx: typer.Context,
    order: int = typer.Option(6, help="Highest order of the moment/cumulant round trip"),
    models: int = typer.Option(5, help="Random discrete field models to test"),
    sites: int = typer.Option(3, help="Sites per discrete model (at most 4)"),
    max_sites: int = typer.Option(8, help="Largest p·m for the diagram formula"),
    shot_noise: bool = typer.Option(True, "--shot-noise/--no-shot-noise", help="Run the field-sampling oracle"),
    samples: int = typer.Option(100_000, help="Simulated fields for the sampling oracle"),
    model: Optional[Path] = typer.Option(None, "--model", help="Shot-noise model JSON"),
) -> None:
    """Exact cumulant identities on discrete models and the shot-noise sampling oracle."""
    config = get_config(ctx)
    rng = np.random.default_rng(config.seed)
    rows: List[dict] = []
    with exit_on_error():
        for k in range(models):
            field = DiscreteFieldModel.random(rng, min(sites, 4))
            bad_roundtrip = roundtrip_mismatches(field, order)
            bad_diagram = diagram_formula_mismatches(field, rng, max_sites)
            rows.append({"check": "roundtrip", "case": k, "pass": not bad_roundtrip, "detail": len(bad_roundtrip)})
            rows.append({"check": "diagram", "case": k, "pass": not bad_diagram, "detail": str(bad_diagram)})
        if shot_noise:
            noise = load_model_spec(model).build()
            for r in sampling_oracle(noise, rng, samples):
                rows.append({
                    "check": f"shot-noise c{r.n}",
                    "case": r.configuration,
                    "pass": r.agrees,
                    "detail": f"{r.analytic:.5g} vs {r.empirical:.5g} ± {r.stderr:.2g}",
                })
    passed = all(r["pass"] for r in rows)
    emit(config, {"pass": passed, "checks": rows}, rows, ["check", "case", "pass", "detail"])
    if not passed:
        raise typer.Exit(EXIT_FAIL)
