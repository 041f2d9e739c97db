"""
Renormalization constant CLI command.
"""

from pathlib import Path
from typing import List, Optional

import typer

from wzbench.graphs import CONSTANT_DIAGRAMS
from wzbench.models import ShotNoiseSpec
from wzbench.numerics import TruncatedKernel, renorm_constant
from wzbench.renormalization import RenormalizationConstants

from .common import emit, exit_on_error, get_config, read_json

app = typer.Typer()

CSV_FIELDS = ["name", "value", "stderr", "method", "budget", "seed"]


def load_model_spec(path: Optional[Path]) -> ShotNoiseSpec:
    """Model section from a JSON file: either the section itself or a document with a ``model`` key."""
    if path is None:
        return ShotNoiseSpec()
    data = read_json(path)
    return ShotNoiseSpec.model_validate(data.get("model", data))


@app.command("constants")
def constants(
    ctx: typer.Context,
    name: List[str] = typer.Option([], "--name", help="Diagram to evaluate (repeatable); default all"),
    model: Optional[Path] = typer.Option(None, "--model", help="Shot-noise model JSON"),
    method: str = typer.Option("mc", help="mc or quadrature (Xi2 only)"),
    variant: str = typer.Option("heat", help="heat (P with c) or truncated (K with c^eps)"),
    eps: Optional[float] = typer.Option(None, help="Regularization ε"),
    naive: bool = typer.Option(False, help="Evaluate renormalized edges as integral minus C^Xi2 g(0)"),
    sampler: str = typer.Option("importance", help="importance or stratified"),
) -> None:
    """Evaluate the diagram integrals behind the renormalization constants."""
    config = get_config(ctx)
    names = name or list(CONSTANT_DIAGRAMS)
    with exit_on_error():
        spec = load_model_spec(model)
        noise = spec.build()
        mc = config.mc(sampler=sampler)
        kernel = TruncatedKernel.build() if variant == "truncated" else None
        estimates = {
            n: renorm_constant(n, noise, method, mc, variant=variant, eps=eps, kernel=kernel, naive=naive)
            for n in names
        }
    rows = [{"name": n, **e.to_dict()} for n, e in estimates.items()]
    payload = {"model": spec.model_dump(), "variant": variant, "eps": eps, "estimates": rows}
    if set(CONSTANT_DIAGRAMS) <= set(estimates):
        assembled = RenormalizationConstants.from_diagrams({n: e.value for n, e in estimates.items()})
        payload["constants"] = assembled.as_dict()
    emit(config, payload, rows, CSV_FIELDS)
