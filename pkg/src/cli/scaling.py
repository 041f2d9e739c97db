"""
Scaling and kernel-norm CLI commands.
"""

from pathlib import Path
from typing import Optional

import typer

from wzbench.numerics import scaling_exponent, setup

from .common import EXIT_FAIL, emit, exit_on_error, get_config, parse_floats
from .constants import load_model_spec

app = typer.Typer()


@app.command("scaling")
def scaling(
    ctx: typer.Context,
    example: str = typer.Option("single-edge", help="single-edge, xi2-pairing or edgeless"),
    lambdas: str = typer.Option("0.5,0.25,0.125,0.0625", help="Geometric λ grid"),
    eps: float = typer.Option(0.05, help="ε for the shot-noise pairing"),
    model: Optional[Path] = typer.Option(None, "--model", help="Shot-noise model JSON"),
    tolerance: float = typer.Option(0.3, help="Allowed |slope − α|"),
) -> None:
    """Fit the λ-exponent of a generalized convolution and compare it with α."""
    config = get_config(ctx)
    with exit_on_error():
        grid = parse_floats(lambdas)
        chosen = setup(example, load_model_spec(model).build(), eps)
        fit = scaling_exponent(
            chosen.graph,
            chosen.kernels,
            grid,
            config.mc(),
            kappa=0.0,
            hyper_kernels=chosen.hyper_kernels,
            radii=chosen.radii,
        )
    payload = {"example": example, **fit.to_dict(), "agrees": fit.agrees(tolerance)}
    rows = [
        {"lambda": lam, "value": e.value, "stderr": e.stderr} for lam, e in zip(fit.lambdas, fit.estimates)
    ]
    table = "\n".join(
        [f"{example}: slope {fit.slope:.3f} ± {fit.stderr:.3f} (95% CI {fit.ci[0]:.3f}..{fit.ci[1]:.3f}), α = {fit.alpha:g}"]
        + [f"  λ={r['lambda']:<10g} I={r['value']:.6g} ± {r['stderr']:.2g}" for r in rows]
    )
    emit(config, payload, rows, table=table)
    if not fit.agrees(tolerance):
        raise typer.Exit(EXIT_FAIL)


@app.command("norms")
def norms(
    ctx: typer.Context,
    eps: str = typer.Option("0.2,0.1,0.05", help="ε values"),
    n: str = typer.Option("2,3", help="Cumulant orders"),
    alpha: Optional[float] = typer.Option(None, help="Norm exponent; default n(|s|/2 + κ)"),
    order: int = typer.Option(0, help="Derivative order for n = 2"),
    model: Optional[Path] = typer.Option(None, "--model", help="Shot-noise model JSON"),
) -> None:
    """Lower-bound estimates of the cumulant norms ‖c_n^(ε)‖_α across ε."""
    from wzbench.trees import kernel_norm_estimate

    config = get_config(ctx)
    rows = []
    with exit_on_error():
        noise = load_model_spec(model).build()
        for e in parse_floats(eps):
            for order_n in (int(v) for v in parse_floats(n)):
                a = alpha if alpha is not None else order_n * (config.s / 2 + config.kappa)
                if order_n == 2:

                    def kappa_fn(w, e=e):  # type: ignore[no-untyped-def]
                        return noise.pair_cumulant(w, e)

                else:

                    def kappa_fn(z, e=e):  # type: ignore[no-untyped-def]
                        return noise.rescaled_cumulant(e, z)

                estimate = kernel_norm_estimate(kappa_fn, order_n, a, config.budget, order, seed=config.seed)
                rows.append({"eps": e, "n": order_n, "alpha": a, "estimate": estimate.estimate})
    emit(config, {"norms": rows}, rows, ["eps", "n", "alpha", "estimate"])
