"""
Ready-made generalized convolutions with known λ-scaling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from ..exceptions import ValidationError
from ..graphs.contraction import ContractionPartition, wick_contract
from ..graphs.hypergraph import ROOT, EdgeKind, LabeledHypergraph, edge2
from ..graphs.library import builtin_graph_library
from .convolution import EdgeKernel, HyperKernel, KernelKey
from .kernels import TruncatedKernel, homogeneous_kernel
from .shot_noise import ShotNoiseModel

SETUPS = ("single-edge", "xi2-pairing", "edgeless")


@dataclass
class ConvolutionSetup:
    name: str
    graph: LabeledHypergraph
    kernels: Dict[KernelKey, EdgeKernel]
    hyper_kernels: Dict[KernelKey, HyperKernel] = field(default_factory=dict)
    radii: Optional[Tuple[float, float]] = None


def single_edge(a: float = 1.0, smoothing: float = 1e-6) -> ConvolutionSetup:
    """One edge {v★, 0} carrying (|z|_s + δ)^{−a}; I ~ λ^{−a}."""
    graph = LabeledHypergraph((ROOT, "v"), frozenset((ROOT, "v")), (edge2("v", ROOT, 1, 0, EdgeKind.KERNEL, "K"),))
    return ConvolutionSetup("single-edge", graph, {EdgeKind.KERNEL: EdgeKernel(homogeneous_kernel(a, smoothing))})


def edgeless() -> ConvolutionSetup:
    graph = LabeledHypergraph((ROOT, "v"), frozenset((ROOT, "v")))
    return ConvolutionSetup("edgeless", graph, {})


def xi2_pairing(model: ShotNoiseModel, eps: float, kernel: Optional[TruncatedKernel] = None) -> ConvolutionSetup:
    """Reduced symmetric pairing of the first Xi2 graph: the second moment of the Xi2 model tested at scale λ."""
    h = builtin_graph_library().find("Xi2:1")
    pi = ContractionPartition(tuple(((1, x), (2, x)) for x in sorted(h.external)))
    graph = wick_contract(h, 2, pi, reduce=True).graph
    k = kernel or TruncatedKernel.build()

    def pair(t: np.ndarray, x: np.ndarray) -> np.ndarray:
        return model.pair_cumulant(np.stack([t, x], axis=-1), eps)

    kernels: Dict[KernelKey, EdgeKernel] = {
        EdgeKind.KERNEL_RENORM: EdgeKernel(k),
        EdgeKind.CONTRACTION: EdgeKernel(pair, mass=model.second_cumulant_mass()),
    }
    return ConvolutionSetup("xi2-pairing", graph, kernels, radii=(1e-3 * eps, 2.0))


def setup(name: str, model: Optional[ShotNoiseModel] = None, eps: float = 0.05) -> ConvolutionSetup:
    if name == "single-edge":
        return single_edge()
    if name == "edgeless":
        return edgeless()
    if name == "xi2-pairing":
        return xi2_pairing(model or ShotNoiseModel().normalized(), eps)
    raise ValidationError(f"unknown setup {name!r}; expected one of {', '.join(SETUPS)}")
