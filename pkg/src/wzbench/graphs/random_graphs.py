"""
Random small elementary graphs for property checks.
"""

from __future__ import annotations

from typing import List, Tuple

import numpy as np

from .hypergraph import (
    DEFAULT_SCALING_NORM,
    ROOT,
    Edge2,
    EdgeKind,
    ElementaryGraph,
    HyperEdge,
    LabeledHypergraph,
    edge2,
    hyperedge_label,
)

KERNEL_CHOICES: Tuple[Tuple[int, int, EdgeKind], ...] = (
    (1, 0, EdgeKind.KERNEL),
    (1, 1, EdgeKind.KERNEL_RENORM),
    (2, 0, EdgeKind.DERIVATIVE),
)


def random_elementary_graph(
    rng: np.random.Generator,
    *,
    max_internal: int = 3,
    externals: bool = True,
    hyperedge_probability: float = 0.3,
    s: int = DEFAULT_SCALING_NORM,
) -> ElementaryGraph:
    """A connected elementary graph: a kernel tree hanging off v★, optional cumulant triple, noise leaves.

    Without ``externals`` every internal vertex of degree < 2 is closed by a (|s|, −1) pairing edge.
    """
    special = "v"
    internal = [special]
    edges: List[Edge2] = [edge2(special, ROOT, 0, 0, EdgeKind.TEST, "test")]
    low = 1 if not externals else 0
    for k in range(int(rng.integers(low, max_internal))):
        name = f"w{k + 1}"
        target = [ROOT, *internal][int(rng.integers(len(internal) + 1))]
        a, r, kind = KERNEL_CHOICES[int(rng.integers(len(KERNEL_CHOICES)))]
        edges.append(edge2(name, target, a, r, kind, kind.value))
        internal.append(name)

    hyper: Tuple[HyperEdge, ...] = ()
    noise: List[str] = []
    if rng.random() < hyperedge_probability:
        noise = ["h1", "h2", "h3"]
        for h in noise:
            edges.append(edge2(h, internal[int(rng.integers(len(internal)))], s, -1, EdgeKind.DELTA, "delta"))
        hyper = (HyperEdge(frozenset(noise), hyperedge_label(3, s), EdgeKind.CUMULANT, "c3"),)

    def degree(v: str) -> int:
        return sum(v in (e.tail, e.head) for e in edges)

    external: List[str] = []
    if externals:
        for v in internal:
            if degree(v) < 2:
                external.append(f"x{len(external) + 1}")
                edges.append(edge2(external[-1], v, s, -1, EdgeKind.DELTA, "delta"))
        if len(external) < 3 and rng.random() < 0.5:
            external.append(f"x{len(external) + 1}")
            edges.append(edge2(external[-1], internal[int(rng.integers(len(internal)))], s, -1, EdgeKind.DELTA, "delta"))
    else:
        for v in internal:
            if degree(v) < 2:
                others = [u for u in internal if u != v]
                partner = others[int(rng.integers(len(others)))]
                edges.append(edge2(v, partner, s, -1, EdgeKind.RENORMALIZED, "c2"))

    vertices = (ROOT, *internal, *noise, *external)
    graph = LabeledHypergraph(vertices, frozenset((ROOT, special)), tuple(edges), hyper, s)
    return ElementaryGraph(graph, frozenset(external), special, "random").validate()
