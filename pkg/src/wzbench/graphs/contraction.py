"""
p-fold Wick contractions of elementary graphs, bad chains and hyperedge merging.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterator, List, Sequence, Set, Tuple, Union

from ..cumulants import partitions
from ..exceptions import DomainError, GraphValidationError, ValidationError
from .hypergraph import (
    ROOT,
    Edge,
    Edge2,
    EdgeKind,
    EdgeLabel,
    ElementaryGraph,
    HyperEdge,
    LabeledHypergraph,
    hyperedge_label,
)

Site = Tuple[int, str]


@dataclass(frozen=True)
class ContractionPartition:
    """Partition of the p copies of H_ex; each block must span at least two copies."""

    blocks: Tuple[Tuple[Site, ...], ...]

    def __post_init__(self) -> None:
        ordered = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "blocks", ordered)

    def is_valid_for(self, external: FrozenSet[str], p: int) -> bool:
        ground = {(i, x) for i in range(1, p + 1) for x in external}
        seen = [site for block in self.blocks for site in block]
        if len(seen) != len(set(seen)) or set(seen) != ground:
            return False
        return all(len({i for i, _ in block}) >= 2 for block in self.blocks)

    def __str__(self) -> str:
        return " | ".join(" ".join(f"{x}#{i}" for i, x in block) for block in self.blocks)


def enumerate_wick_partitions(external: Union[Sequence[str], FrozenSet[str]], p: int) -> Iterator[ContractionPartition]:
    """Yield each partition of the p copies of ``external`` whose blocks span ≥ 2 copies."""
    if p < 2:
        raise ValidationError(f"Wick contractions need p >= 2, got {p}")
    sites: List[Site] = [(i, x) for i in range(1, p + 1) for x in sorted(external)]
    for blocks in partitions(sites):
        if all(len({i for i, _ in block}) >= 2 for block in blocks):
            yield ContractionPartition(tuple(tuple(b) for b in blocks))


def copy_name(v: str, i: int) -> str:
    return v if v == ROOT else f"{v}#{i}"


@dataclass(frozen=True)
class ContractionResult:
    graph: LabeledHypergraph
    retraction: Dict[str, str] = field(default_factory=dict)
    pair_chains: Tuple[Tuple[str, str, str, str], ...] = ()
    reduced: bool = False

    def bad_chains(self) -> List[FrozenSet[str]]:
        """Subsets of {u, v, i(u), i(v)} with more than two elements, for each size-2 block."""
        found: List[FrozenSet[str]] = []
        for chain in self.pair_chains:
            full = frozenset(chain)
            found.append(full)
            for drop in chain:
                found.append(full - {drop})
        return found

    def is_bad_chain(self, subset: Union[Sequence[str], FrozenSet[str]]) -> bool:
        candidate = frozenset(subset)
        return len(candidate) > 2 and any(candidate <= frozenset(c) for c in self.pair_chains)


def wick_contract(h: ElementaryGraph, p: int, pi: ContractionPartition, reduce: bool = True) -> ContractionResult:
    """Glue p copies of H at 0 and contract the external vertices along π."""
    if not pi.is_valid_for(h.external, p):
        raise DomainError(f"partition {pi} is not a valid contraction of {sorted(h.external)} with p={p}")
    g = h.graph
    s = g.s
    vertices = [ROOT] + [copy_name(v, i) for i in range(1, p + 1) for v in g.vertices if v != ROOT]
    edges2: List[Edge2] = []
    edges_h: List[HyperEdge] = []
    for i in range(1, p + 1):
        for e in g.edges2:
            edges2.append(replace(e, tail=copy_name(e.tail, i), head=copy_name(e.head, i),
                                  name=f"{e.name or e.kind.value}#{i}"))
        for he in g.edges_h:
            edges_h.append(replace(he, members=frozenset(copy_name(v, i) for v in he.members),
                                   name=f"{he.name or he.kind.value}#{i}"))
    contraction_label = EdgeLabel.of(s, -1)
    chains: List[Tuple[str, str, str, str]] = []
    for block in pi.blocks:
        names = [copy_name(x, i) for i, x in block]
        if len(block) == 2:
            edges2.append(Edge2(names[0], names[1], contraction_label, EdgeKind.CONTRACTION, "pair"))
            (i1, x1), (i2, x2) = block
            chains.append((
                copy_name(h.external_neighbor(x1), i1),
                names[0],
                names[1],
                copy_name(h.external_neighbor(x2), i2),
            ))
        else:
            edges_h.append(HyperEdge(frozenset(names), hyperedge_label(len(names), s), EdgeKind.CUMULANT, "block"))
    vstar = frozenset([ROOT] + [copy_name(h.special, i) for i in range(1, p + 1)])
    full = LabeledHypergraph(tuple(vertices), vstar, tuple(edges2), tuple(edges_h), s)
    if not reduce:
        return ContractionResult(full, {v: v for v in vertices}, tuple(chains), False)

    removed: Set[str] = set()
    retraction: Dict[str, str] = {}
    new_edges: List[Edge2] = []
    for iu, u, v, iv in chains:
        removed |= {u, v}
        retraction[u] = iu
        retraction[v] = iv
        new_edges.append(Edge2(iu, iv, contraction_label, EdgeKind.CONTRACTION, "reduced"))
    kept_vertices = tuple(v for v in vertices if v not in removed)
    for v in kept_vertices:
        retraction[v] = v
    kept_edges = [e for e in edges2 if not (e.members & removed)]
    graph = LabeledHypergraph(kept_vertices, vstar, tuple(kept_edges + new_edges), tuple(edges_h), s)
    return ContractionResult(graph, retraction, tuple(chains), True)


def _is_contraction_edge(e: Edge, s: int) -> bool:
    return isinstance(e, Edge2) and e.label == EdgeLabel.of(s, -1)


def normalize_bad_chains(graph: Union[LabeledHypergraph, ElementaryGraph]) -> Union[LabeledHypergraph, ElementaryGraph]:
    """Integrate out noise vertices sitting between two (|s|, −1) edges."""
    if isinstance(graph, ElementaryGraph):
        inner = _normalize(graph.graph, protected=graph.external | {graph.special})
        return replace(graph, graph=inner)
    return _normalize(graph, protected=frozenset())


def _normalize(g: LabeledHypergraph, protected: FrozenSet[str]) -> LabeledHypergraph:
    changed = True
    while changed:
        changed = False
        hyper = g.hyper_vertices()
        for w in g.vertices:
            if w == ROOT or w in g.vstar or w in protected or w in hyper:
                continue
            incident = g.incident(w)
            if len(incident) != 2 or not all(_is_contraction_edge(e, g.s) for e in incident):
                continue
            e1, e2 = incident
            assert isinstance(e1, Edge2) and isinstance(e2, Edge2)
            a, b = e1.other(w), e2.other(w)
            if a == b:
                continue
            if b in hyper and a not in hyper:
                a, b = b, a
            merged = Edge2(a, b, e1.label, EdgeKind.CONTRACTION, "integrated")
            edges2 = tuple(e for e in g.edges2 if e is not e1 and e is not e2) + (merged,)
            g = LabeledHypergraph(tuple(v for v in g.vertices if v != w), g.vstar, edges2, g.edges_h, g.s)
            changed = True
            break
    return g


def mergeable(h: ElementaryGraph, e: Edge) -> bool:
    return (
        h.is_internal_edge(e)
        and e.label.a == hyperedge_label(len(e.members), h.s).a
        and e.label.r <= 0
    )


def merge_hyperedges(h: ElementaryGraph, first: int, second: int) -> ElementaryGraph:
    """Replace edges ``first`` and ``second`` (indices into ``all_edges()``) by their union."""
    edges = h.graph.all_edges()
    if first == second or not (0 <= first < len(edges) and 0 <= second < len(edges)):
        raise DomainError(f"invalid edge indices ({first}, {second})")
    e1, e2 = edges[first], edges[second]
    for e in (e1, e2):
        if not mergeable(h, e):
            raise DomainError(f"edge {e} must be internal with a = |e||s|/2 and r <= 0")
    members = e1.members | e2.members
    rest = [e for k, e in enumerate(edges) if k not in (first, second)]
    merged = HyperEdge(frozenset(members), hyperedge_label(len(members), h.s), EdgeKind.CUMULANT, "merged")
    graph = LabeledHypergraph(
        h.graph.vertices,
        h.graph.vstar,
        tuple(e for e in rest if isinstance(e, Edge2)),
        tuple(e for e in rest if isinstance(e, HyperEdge)) + (merged,),
        h.s,
    )
    result = replace(h, graph=graph)
    try:
        result.validate()
    except GraphValidationError as exc:
        raise DomainError(f"merging produces an invalid elementary graph: {exc}") from exc
    return result


def mergeable_pairs(h: ElementaryGraph) -> List[Tuple[int, int]]:
    edges = h.graph.all_edges()
    idx = [k for k, e in enumerate(edges) if mergeable(h, e)]
    return [(i, j) for n, i in enumerate(idx) for j in idx[n + 1 :]]
