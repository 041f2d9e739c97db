"""
Diagram integrals of the renormalization constants.

Each diagram is a tree of kernel edges rooted at 0 with cumulant factors on
its vertices. Monte-Carlo samples the edge increments w = z_head − z_tail
from a heat-shaped proposal, so heat-kernel weights are bounded ratios.
The renormalized edge Q = P·𝔠₂ − C^{Xi2} δ is integrated as the subtracted
pairing ∫ P 𝔠₂ (F(w) − F(0)) on the same samples.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Dict, Mapping, Optional, Tuple

import numpy as np
from scipy import integrate

from ..exceptions import ToleranceError, ValidationError, validate_epsilon
from ..graphs.hypergraph import ROOT
from ..graphs.library import CONSTANT_DIAGRAMS, ConstantDiagram
from ..models.config import MCConfig
from ..renormalization import RenormalizationConstants
from .kernels import TruncatedKernel
from .sampling import HeatProposal, MCEstimate, run_batches, uniforms
from .shot_noise import ShotNoiseModel

logger = logging.getLogger(__name__)

METHODS = ("mc", "quadrature")
Y_CAP = 40.0


def diagram(name: str) -> ConstantDiagram:
    try:
        return CONSTANT_DIAGRAMS[name]
    except KeyError as exc:
        raise ValidationError(f"unknown diagram {name!r}; expected one of {', '.join(CONSTANT_DIAGRAMS)}") from exc


class _Integrand:
    """Kernel and cumulant choices for one constant variant."""

    def __init__(self, model: ShotNoiseModel, eps: Optional[float], kernel: Optional[TruncatedKernel]):
        self.model = model
        self.eps = eps
        self.kernel = kernel

    @property
    def time_scale(self) -> float:
        return self.model.correlation_time * (self.eps**2 if self.eps is not None else 1.0)

    def cumulant(self, pts: np.ndarray) -> np.ndarray:
        if self.eps is None:
            return self.model.cumulant(pts)
        return self.model.rescaled_cumulant(self.eps, pts)

    def pair(self, w: np.ndarray) -> np.ndarray:
        return self.model.pair_cumulant(w, self.eps)

    def ratio(self, proposal: HeatProposal, w: np.ndarray) -> np.ndarray:
        if self.kernel is None:
            return proposal.heat_ratio(w)
        return self.kernel(w[:, 0], w[:, 1]) / proposal.density(w)


def _variant(model: ShotNoiseModel, variant: str, eps: Optional[float],
             kernel: Optional[TruncatedKernel]) -> _Integrand:
    if variant == "heat":
        return _Integrand(model, eps, None)
    if variant == "truncated":
        if eps is None:
            raise ValidationError("the truncated-kernel variant needs ε")
        validate_epsilon(eps)
        return _Integrand(model, eps, kernel or TruncatedKernel.build())
    raise ValidationError(f"unknown variant {variant!r}; expected 'heat' or 'truncated'")


def _positions(d: ConstantDiagram, increments: Dict[int, np.ndarray], n: int, zeroed: Optional[int] = None) -> Dict[str, np.ndarray]:
    pos = {ROOT: np.zeros((n, 2))}
    for k, (edge, placed, new) in enumerate(d.tree_order()):
        w = np.zeros((n, 2)) if k == zeroed else increments[k]
        pos[new] = pos[placed] + w if new == edge.head else pos[placed] - w
    return pos


def _cumulants(d: ConstantDiagram, f: _Integrand, pos: Mapping[str, np.ndarray]) -> np.ndarray:
    value = np.ones(next(iter(pos.values())).shape[0])
    for members in d.cumulants:
        value = value * f.cumulant(np.stack([pos[m] for m in members], axis=1))
    return value


def _batch_fn(d: ConstantDiagram, f: _Integrand, proposal: HeatProposal, sampler: str,
              naive_constant: Optional[float]) -> Callable[[np.random.Generator, int], np.ndarray]:
    order = d.tree_order()

    def batch(rng: np.random.Generator, n: int) -> np.ndarray:
        u = uniforms(rng, n, 2 * len(order), sampler)
        increments: Dict[int, np.ndarray] = {}
        weight = np.ones(n)
        other = np.ones(n)
        renorm: Optional[int] = None
        for k, (edge, _, _) in enumerate(order):
            w = proposal.sample(u[:, 2 * k : 2 * k + 2])
            increments[k] = w
            ratio = f.ratio(proposal, w)
            if edge.renormalized:
                renorm = k
                weight = weight * ratio * f.pair(w)
            else:
                weight = weight * ratio
                other = other * ratio
        full = _cumulants(d, f, _positions(d, increments, n))
        if renorm is None:
            return weight * full
        at_zero = _cumulants(d, f, _positions(d, increments, n, zeroed=renorm))
        if naive_constant is None:
            return weight * (full - at_zero)
        return weight * full - naive_constant * other * at_zero

    return batch


def _xi2_quadrature(f: _Integrand, tol: float = 1e-8) -> float:
    """∫ Kern(t, x) 𝔠₂((t, x), 0) dt dx with x = √t·y."""
    norm = 1.0 / math.sqrt(4.0 * math.pi)
    if f.kernel is None:
        t_max = 60.0 * f.time_scale

        def weight(t: float, y: float) -> float:
            return norm * math.exp(-y * y / 4.0)
    else:
        t_max = f.kernel.outer**2
        kernel = f.kernel

        def weight(t: float, y: float) -> float:
            root = math.sqrt(t)
            return root * float(kernel(t, root * y))

    def integrand(y: float, t: float) -> float:
        pt = np.array([t, math.sqrt(t) * y])
        return weight(t, y) * float(f.pair(pt))

    value, err = integrate.dblquad(integrand, 0.0, t_max, -Y_CAP, Y_CAP, epsabs=1e-10, epsrel=1e-9)
    if err > tol * max(1.0, abs(value)):
        raise ToleranceError(f"quadrature error {err:.2g} exceeds tolerance")
    return value


def renorm_constant(
    name: str,
    model: ShotNoiseModel,
    method: str = "mc",
    cfg: Optional[MCConfig] = None,
    *,
    variant: str = "heat",
    eps: Optional[float] = None,
    kernel: Optional[TruncatedKernel] = None,
    naive: bool = False,
) -> MCEstimate:
    """Evaluate one diagram integral.

    ``variant="heat"`` uses the heat kernel with the unscaled cumulants (or
    𝔠^{(ε)} when ``eps`` is given); ``variant="truncated"`` uses K with 𝔠^{(ε)}.
    ``naive`` evaluates a renormalized edge as the two-term integral minus
    C^{Xi2}·F(0) instead of the subtracted pairing.
    """
    d = diagram(name)
    if method not in METHODS:
        raise ValidationError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    cfg = cfg or MCConfig()
    f = _variant(model, variant, eps, kernel)
    if method == "quadrature":
        if name != "Xi2":
            raise ValidationError("quadrature is available for the Xi2 diagram only")
        value = _xi2_quadrature(f)
        return MCEstimate(value, 0.0, 0, "quadrature", cfg.seed, 0)
    proposal = HeatProposal(cfg.proposal_scale * f.time_scale)
    naive_constant = None
    if naive and any(e.renormalized for e in d.edges):
        naive_constant = _xi2_quadrature(f)
    label = f"{name}/{variant}/{'naive' if naive_constant is not None else 'mc'}"
    estimate = run_batches(_batch_fn(d, f, proposal, cfg.sampler, naive_constant), cfg, label)
    return MCEstimate(estimate.value, estimate.stderr, estimate.n, "mc", cfg.seed, cfg.budget, estimate.noisy)


def all_constants(
    model: ShotNoiseModel,
    cfg: Optional[MCConfig] = None,
    *,
    variant: str = "heat",
    eps: Optional[float] = None,
) -> Dict[str, MCEstimate]:
    cfg = cfg or MCConfig()
    kernel = TruncatedKernel.build() if variant == "truncated" else None
    results = {}
    for name in CONSTANT_DIAGRAMS:
        results[name] = renorm_constant(name, model, "mc", cfg, variant=variant, eps=eps, kernel=kernel)
        logger.info("%s = %.6g ± %.2g", name, results[name].value, results[name].stderr)
    return results


def renormalization_constants(
    model: ShotNoiseModel,
    cfg: Optional[MCConfig] = None,
    **kwargs: object,
) -> Tuple[RenormalizationConstants, Dict[str, MCEstimate]]:
    estimates = all_constants(model, cfg, **kwargs)  # type: ignore[arg-type]
    return RenormalizationConstants.from_diagrams({k: v.value for k, v in estimates.items()}), estimates
