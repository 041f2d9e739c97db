"""
Labeled hypergraphs and elementary graphs.

A labeled hypergraph has a root vertex ``"0"``, a set V★ of distinguished
vertices, directed 2-edges and hyperedges, each carrying a label (a_e, r_e).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Sequence, Set, Tuple, Union

import networkx as nx

from ..exceptions import GraphValidationError, ValidationError, validate_scaling_norm
from ..homogeneity import Homogeneity, HomogeneityLike, total

ROOT = "0"
DEFAULT_SCALING_NORM = 3


class EdgeKind(str, Enum):
    TEST = "test"
    KERNEL = "kernel"
    KERNEL_RENORM = "kernel_renorm"
    DERIVATIVE = "derivative"
    DELTA = "delta"
    CONTRACTION = "contraction"
    CUMULANT = "cumulant"
    RENORMALIZED = "renormalized"
    GENERIC = "generic"


@dataclass(frozen=True)
class EdgeLabel:
    a: Homogeneity
    r: int = 0

    @classmethod
    def of(cls, a: HomogeneityLike, r: int = 0) -> EdgeLabel:
        return cls(Homogeneity.of(a), int(r))

    @property
    def r_minus(self) -> int:
        return -min(self.r, 0)

    def __str__(self) -> str:
        return f"({self.a}, {self.r})"


@dataclass(frozen=True)
class Edge2:
    """Directed 2-edge e = (e−, e+)."""

    tail: str
    head: str
    label: EdgeLabel
    kind: EdgeKind = EdgeKind.GENERIC
    name: str = ""

    @property
    def members(self) -> FrozenSet[str]:
        return frozenset((self.tail, self.head))

    def other(self, v: str) -> str:
        return self.head if v == self.tail else self.tail

    def __str__(self) -> str:
        return f"{self.tail}->{self.head} {self.label}"


@dataclass(frozen=True)
class HyperEdge:
    members: FrozenSet[str]
    label: EdgeLabel
    kind: EdgeKind = EdgeKind.CUMULANT
    name: str = ""

    def __str__(self) -> str:
        return "{" + ",".join(sorted(self.members)) + "} " + str(self.label)


Edge = Union[Edge2, HyperEdge]


def hyperedge_label(size: int, s: int) -> EdgeLabel:
    return EdgeLabel(Homogeneity(Fraction(size * s, 2)), 0)


def edge2(tail: str, head: str, a: HomogeneityLike, r: int = 0, kind: EdgeKind = EdgeKind.GENERIC, name: str = "") -> Edge2:
    return Edge2(tail, head, EdgeLabel.of(a, r), kind, name)


@dataclass(frozen=True)
class LabeledHypergraph:
    vertices: Tuple[str, ...]
    vstar: FrozenSet[str]
    edges2: Tuple[Edge2, ...] = ()
    edges_h: Tuple[HyperEdge, ...] = ()
    s: int = DEFAULT_SCALING_NORM

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "vstar", frozenset(self.vstar))
        object.__setattr__(self, "edges2", tuple(self.edges2))
        object.__setattr__(self, "edges_h", tuple(self.edges_h))

    @property
    def s_norm(self) -> Homogeneity:
        return Homogeneity(self.s)

    @property
    def non_root(self) -> Tuple[str, ...]:
        return tuple(v for v in self.vertices if v != ROOT)

    def all_edges(self) -> List[Edge]:
        return [*self.edges2, *self.edges_h]

    def hyper_vertices(self) -> Set[str]:
        found: Set[str] = set()
        for e in self.edges_h:
            found |= e.members
        return found

    def degree(self, v: str) -> int:
        count = sum((e.tail == v) + (e.head == v) for e in self.edges2)
        return count + sum(v in e.members for e in self.edges_h)

    def incident(self, v: str) -> List[Edge]:
        return [e for e in self.all_edges() if v in e.members]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        for e in self.edges2:
            g.add_edge(e.tail, e.head)
        for h in self.edges_h:
            ordered = sorted(h.members)
            for u, v in zip(ordered, ordered[1:]):
                g.add_edge(u, v)
        return g

    def is_connected(self) -> bool:
        return len(self.vertices) > 0 and nx.is_connected(self.to_networkx())

    def structural_errors(self) -> List[str]:
        errors: List[str] = []
        try:
            validate_scaling_norm(self.s)
        except ValidationError as exc:
            errors.append(str(exc))
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            errors.append("duplicate vertex names")
        if ROOT not in vset:
            errors.append("root vertex '0' missing")
        if ROOT not in self.vstar:
            errors.append("V★ must contain the root vertex '0'")
        if not self.vstar <= vset:
            errors.append(f"V★ contains unknown vertices {sorted(self.vstar - vset)}")
        for e in self.edges2:
            if e.tail not in vset or e.head not in vset:
                errors.append(f"2-edge {e} references an unknown vertex")
            if e.tail == e.head:
                errors.append(f"2-edge {e} is a loop")
        for h in self.edges_h:
            if not h.members <= vset:
                errors.append(f"hyperedge {h} references an unknown vertex")
            if len(h.members) < 3:
                errors.append(f"hyperedge {h} has fewer than 3 vertices")
            if h.label != hyperedge_label(len(h.members), self.s):
                errors.append(f"hyperedge {h} must be labeled (|e||s|/2, 0)")
            if h.members & self.vstar:
                errors.append(f"hyperedge {h} meets V★")
        for i, h1 in enumerate(self.edges_h):
            for h2 in self.edges_h[i + 1 :]:
                if h1.members & h2.members:
                    errors.append(f"hyperedges {h1} and {h2} are not disjoint")
        covered = self.hyper_vertices()
        for e in self.edges2:
            meet = e.members & covered
            if len(meet) > 1:
                errors.append(f"2-edge {e} meets the hyperedges in more than one vertex")
            elif meet:
                if e.label.r > 0:
                    errors.append(f"2-edge {e} meets a hyperedge but has r > 0")
                if meet != {e.tail}:
                    errors.append(f"2-edge {e} meets a hyperedge at its head")
        return errors

    def validate(self) -> LabeledHypergraph:
        errors = self.structural_errors()
        if errors:
            raise GraphValidationError("; ".join(errors))
        return self

    def edges0(self, subset: Iterable[str]) -> List[Edge]:
        """Edges contained in the subset."""
        vbar = frozenset(subset)
        return [e for e in self.all_edges() if e.members <= vbar]

    def edges_meeting(self, subset: Iterable[str]) -> List[Edge]:
        vbar = frozenset(subset)
        return [e for e in self.all_edges() if e.members & vbar]

    def edges_up(self, subset: Iterable[str]) -> List[Edge2]:
        """2-edges leaving the subset from their tail, with r > 0."""
        vbar = frozenset(subset)
        return [e for e in self.edges2 if e.label.r > 0 and e.tail in vbar and e.head not in vbar]

    def edges_down(self, subset: Iterable[str]) -> List[Edge2]:
        """2-edges entering the subset at their head, with r > 0."""
        vbar = frozenset(subset)
        return [e for e in self.edges2 if e.label.r > 0 and e.head in vbar and e.tail not in vbar]

    def total_degree(self) -> Homogeneity:
        return total([e.label.a for e in self.all_edges()])

    def alpha_exponent(self) -> Homogeneity:
        return alpha_exponent(self)

    def relabel(self, mapping: Dict[str, str]) -> LabeledHypergraph:
        def m(v: str) -> str:
            return mapping.get(v, v)

        return LabeledHypergraph(
            vertices=tuple(m(v) for v in self.vertices),
            vstar=frozenset(m(v) for v in self.vstar),
            edges2=tuple(replace(e, tail=m(e.tail), head=m(e.head)) for e in self.edges2),
            edges_h=tuple(replace(h, members=frozenset(m(v) for v in h.members)) for h in self.edges_h),
            s=self.s,
        )


def alpha_exponent(graph: LabeledHypergraph) -> Homogeneity:
    """α = |s|·|V ∖ V★| − Σ_e a_e."""
    free = len([v for v in graph.vertices if v not in graph.vstar])
    return Homogeneity(graph.s * free) - graph.total_degree()


@dataclass(frozen=True)
class ElementaryGraph:
    """Connected moment graph with external noise vertices and the test edge {0, v★}."""

    graph: LabeledHypergraph
    external: FrozenSet[str] = field(default_factory=frozenset)
    special: str = ""
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "external", frozenset(self.external))

    @property
    def s(self) -> int:
        return self.graph.s

    @property
    def internal(self) -> FrozenSet[str]:
        return frozenset(v for v in self.graph.vertices if v != ROOT and v not in self.external)

    def star_edges(self) -> List[Edge2]:
        pair = frozenset((ROOT, self.special))
        return [e for e in self.graph.edges2 if e.members == pair]

    def is_internal_edge(self, e: Edge) -> bool:
        return not (e.members & self.external) and e not in self.star_edges()

    def external_neighbor(self, x: str) -> str:
        """i(x): the internal vertex joined to the external vertex x."""
        (e,) = self.graph.incident(x)
        if not isinstance(e, Edge2):
            raise GraphValidationError(f"external vertex {x} must sit on a 2-edge")
        return e.other(x)

    def structural_errors(self) -> List[str]:
        errors = self.graph.structural_errors()
        g = self.graph
        vset = set(g.vertices)
        if not self.external <= vset:
            errors.append(f"external vertices {sorted(self.external - vset)} are unknown")
        if ROOT in self.external:
            errors.append("the root cannot be external")
        if self.special not in self.internal:
            errors.append(f"special vertex {self.special!r} must be internal")
        if g.vstar != frozenset((ROOT, self.special)):
            errors.append("V★ must equal {0, v★}")
        if len(self.star_edges()) != 1:
            errors.append("exactly one edge must join 0 and v★")
        for x in self.external & vset:
            if g.degree(x) != 1:
                errors.append(f"external vertex {x} must have degree 1")
            for e in g.edges2:
                if x in e.members and e.label.a != g.s_norm:
                    errors.append(f"external edge {e} must have a = |s|")
        for v in self.internal:
            if v in vset and g.degree(v) < 2:
                errors.append(f"internal vertex {v} must have degree at least 2")
        for e in g.edges2:
            if not e.label.a < Homogeneity(2 * g.s):
                errors.append(f"2-edge {e} must have a < 2|s|")
        if not errors and not g.is_connected():
            errors.append("elementary graph must be connected")
        return errors

    def validate(self) -> ElementaryGraph:
        errors = self.structural_errors()
        if errors:
            raise GraphValidationError("; ".join(errors))
        return self


def build_graph(
    vertices: Sequence[str],
    vstar: Iterable[str],
    edges2: Sequence[Edge2] = (),
    edges_h: Sequence[HyperEdge] = (),
    s: int = DEFAULT_SCALING_NORM,
) -> LabeledHypergraph:
    return LabeledHypergraph(tuple(vertices), frozenset(vstar), tuple(edges2), tuple(edges_h), s).validate()
