"""
Curated elementary graphs for the moment expansions of the negative symbols,
and the diagrams of the renormalization constants.

Edge conventions: the test edge joins v★ to 0 with label (0, 0), also when the
test function carries a factor x; kernels are (1, 0); barred kernels carry a
positive renormalization (1, 1) or (1, 2); derivative kernels are (2, 0); an
external noise vertex hangs on a (3, −1) δ-edge pointing into the graph;
cumulants of order n ≥ 3 are hyperedges labeled (3n/2, 0) whose legs are
(3 + κ, −1) δ-edges, one κ per noise as in |Ξ| = −3/2 − κ. The renormalized
kernels left by the Xi3 and Xi3b subdiagrams are (7/2 + 3κ, −1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from ..exceptions import ValidationError
from ..homogeneity import Homogeneity
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

S = DEFAULT_SCALING_NORM
LEG = Homogeneity(S, 1)
SUBDIAGRAM = Homogeneity(Fraction(7, 2), 3)


def _test(v: str) -> Edge2:
    return edge2(v, ROOT, 0, 0, EdgeKind.TEST, "test")


def _test_x(v: str) -> Edge2:
    return edge2(v, ROOT, 0, 0, EdgeKind.TEST, "testx")


def _kernel(tail: str, head: str) -> Edge2:
    return edge2(tail, head, 1, 0, EdgeKind.KERNEL, "K")


def _barred(tail: str, head: str) -> Edge2:
    return edge2(tail, head, 1, 1, EdgeKind.KERNEL_RENORM, "Kbar")


def _barred2(tail: str, head: str) -> Edge2:
    return edge2(tail, head, 1, 2, EdgeKind.KERNEL_RENORM, "Kbar2")


def _derivative(tail: str, head: str) -> Edge2:
    return edge2(tail, head, 2, 0, EdgeKind.DERIVATIVE, "DK")


def _delta(noise: str, target: str) -> Edge2:
    return edge2(noise, target, S, -1, EdgeKind.DELTA, "delta")


def _leg(noise: str, target: str) -> Edge2:
    return edge2(noise, target, LEG, -1, EdgeKind.DELTA, "leg")


def _subdiagram(tail: str, head: str, name: str) -> Edge2:
    """Xi3-type subdiagram minus its constant times δ, as one kernel."""
    return edge2(tail, head, SUBDIAGRAM, -1, EdgeKind.RENORMALIZED, name)


def _pair(tail: str, head: str, kind: EdgeKind = EdgeKind.RENORMALIZED) -> Edge2:
    return edge2(tail, head, S, -1, kind, "c2")


def _cumulant(*members: str) -> HyperEdge:
    return HyperEdge(frozenset(members), hyperedge_label(len(members), S), EdgeKind.CUMULANT, f"c{len(members)}")


def _elementary(
    name: str,
    vertices: List[str],
    special: str,
    edges2: List[Edge2],
    edges_h: Tuple[HyperEdge, ...] = (),
    external: Tuple[str, ...] = (),
) -> ElementaryGraph:
    graph = LabeledHypergraph(tuple([ROOT, *vertices]), frozenset((ROOT, special)), tuple(edges2), edges_h, S)
    return ElementaryGraph(graph, frozenset(external), special, name).validate()


def _term(
    name: str,
    special: str,
    kernels: Sequence[Edge2],
    cumulant: Sequence[str] = (),
    noise: Optional[str] = None,
    x_test: bool = False,
) -> ElementaryGraph:
    """Graph of one moment term: test edge, kernels, an optional cumulant
    whose k-th leg lands on ``cumulant[k]`` and an optional external noise on ``noise``."""
    members = [f"h{k}" for k in range(1, len(cumulant) + 1)]
    edges = [(_test_x if x_test else _test)(special), *kernels]
    edges += [_leg(h, target) for h, target in zip(members, cumulant)]
    if noise is not None:
        edges.append(_delta("x", noise))
    vertices = [special]
    for e in edges:
        for v in (e.tail, e.head):
            if v != ROOT and v not in vertices:
                vertices.append(v)
    hyper = (_cumulant(*members),) if members else ()
    return _elementary(name, vertices, special, edges, hyper, ("x",) if noise is not None else ())


def _xi() -> Tuple[ElementaryGraph, ...]:
    return (_term("Xi", "v", [], noise="v"),)


def _xi2() -> Tuple[ElementaryGraph, ...]:
    first = _elementary(
        "Xi2:1",
        ["v", "w", "x1", "x2"],
        "v",
        [_test("v"), _barred("w", "v"), _delta("x1", "v"), _delta("x2", "w")],
        external=("x1", "x2"),
    )
    second = _elementary("Xi2:2", ["l", "r"], "l", [_test("l"), _kernel("r", ROOT), _pair("r", "l")])
    return first, second


def _xi3() -> Tuple[ElementaryGraph, ...]:
    legs = ("l2", "l", "l1")
    return (
        _term("Xi3:1", "l", [_kernel("l1", ROOT), _kernel("l2", "l1")], legs),
        _term("Xi3:2", "l", [_barred("l1", "l"), _kernel("l2", ROOT)], legs),
    )


def _xi3b() -> Tuple[ElementaryGraph, ...]:
    legs = ("right", "left", "r2")
    return (
        _term("Xi3b:1", "r2", [_kernel("left", "r2"), _kernel("right", ROOT)], legs),
        _term("Xi3b:2", "r2", [_kernel("left", ROOT), _kernel("right", ROOT)], legs),
    )


def _xi4() -> Tuple[ElementaryGraph, ...]:
    """Chain l3 → l2 → l1 → l hanging under the test vertex, one noise left free."""
    chain = [_barred("l2", "l1"), _barred("l3", "l2")]
    return (
        _term("Xi4:1", "l", [_barred2("l1", "l"), _kernel("l2", ROOT), _kernel("l3", "l2")], ("l3", "l1", "l2"), "l"),
        _term("Xi4:2", "l", [_barred2("l1", "l"), _barred("l2", "l1"), _kernel("l3", ROOT)], ("l3", "l1", "l2"), "l"),
        _term("Xi4:3", "l", [_barred2("l1", "l"), *chain], ("l3", "l", "l2"), "l1"),
        _term("Xi4:4", "l", [_barred2("l1", "l"), *chain], ("l3", "l", "l1"), "l2"),
        _term("Xi4:5", "l", [_barred("l3", "l2"), _subdiagram("l2", "l", "Q_Xi3")], noise="l3"),
        _term("Xi4:6", "l", [_barred2("l1", "l"), _kernel("l2", ROOT), _barred("l3", "l2")], ("l2", "l", "l1"), "l3"),
        _term("Xi4:7", "l", [_kernel("l1", ROOT), *chain], ("l2", "l", "l1"), "l3"),
        _term("Xi4:8", "l", [_derivative("l1", ROOT), *chain], ("l2", "l", "l1"), "l3", x_test=True),
    )


def _xi4e() -> Tuple[ElementaryGraph, ...]:
    barred = [_barred("left", "r2"), _barred("right", "r2"), _barred("top", "left")]
    return (
        _term("Xi4e:1", "r2", barred, ("left", "right", "top"), "r2"),
        _term("Xi4e:2", "r2", [_kernel("left", "r2"), _barred("right", "r2"), _kernel("top", ROOT)],
              ("left", "r2", "top"), "right"),
        _term("Xi4e:3", "r2", [_kernel("left", ROOT), _barred("right", "r2"), _barred("top", "left")],
              ("left", "r2", "top"), "right"),
        _term("Xi4e:4", "r2", barred, ("r2", "right", "top"), "left"),
        _term("Xi4e:5", "r2", [_kernel("left", ROOT), _barred("right", "r2"), _barred("top", "left")],
              ("left", "right", "r2"), "top"),
        _term("Xi4e:6", "r2", [_kernel("left", "r2"), _kernel("right", ROOT), _barred("top", "left")],
              ("left", "right", "r2"), "top"),
        _term("Xi4e:7", "r2", [_barred("top", "left"), _subdiagram("left", "r2", "Q_Xi3b")], noise="top"),
    )


def _xi4b() -> Tuple[ElementaryGraph, ...]:
    """Three branches into r2; the last three terms carry a fourth cumulant."""
    fourth = ("left", "right", "middle", "r2")
    return (
        _term("Xi4b:1", "r2", [_barred("left", "r2"), _barred("right", "r2"), _barred("middle", "r2")],
              ("left", "right", "middle"), "r2"),
        # the noisy branch keeps its barred kernel after the Xi3b counterterm cancels
        _term("Xi4b:2", "r2", [_kernel("left", "r2"), _barred("right", "r2"), _kernel("middle", ROOT)],
              ("left", "middle", "r2"), "right"),
        _term("Xi4b:3", "r2", [_kernel("left", ROOT), _barred("right", "r2"), _kernel("middle", ROOT)],
              ("left", "middle", "r2"), "right"),
        _term("Xi4b:4", "r2", [_kernel("left", "r2"), _kernel("right", ROOT), _kernel("middle", "r2")], fourth),
        _term("Xi4b:5", "r2", [_kernel("left", "r2"), _kernel("right", ROOT), _kernel("middle", ROOT)], fourth),
        _term("Xi4b:6", "r2", [_kernel("left", ROOT), _kernel("right", ROOT), _kernel("middle", ROOT)], fourth),
    )


def _xi4c() -> Tuple[ElementaryGraph, ...]:
    return (
        _term("Xi4c:1", "r2", [_barred("left", "mid"), _subdiagram("mid", "r2", "Q_Xi3mid")], noise="left"),
        _term("Xi4c:2", "r2", [_barred2("middle", "r2"), _barred("left", "middle"), _kernel("top", ROOT)],
              ("middle", "top", "r2"), "left"),
        _term("Xi4c:3", "r2", [_kernel("middle", ROOT), _barred("left", "middle"), _kernel("top", "middle")],
              ("middle", "top", "r2"), "left"),
        _term("Xi4c:4", "r2", [_derivative("middle", ROOT), _barred("left", "middle"), _kernel("top", "middle")],
              ("middle", "top", "r2"), "left", x_test=True),
        _term("Xi4c:5", "r2", [_barred2("middle", "r2"), _barred("right", "middle"), _barred("top", "middle")],
              ("right", "top", "r2"), "middle"),
        _term("Xi4c:6", "r2", [_barred2("middle", "r2"), _kernel("left", ROOT), _kernel("right", "middle")],
              ("right", "left", "middle"), "r2"),
        _term("Xi4c:7", "r2", [_barred2("middle", "r2"), _kernel("left", ROOT), _kernel("right", ROOT)],
              ("right", "left", "middle"), "r2"),
        _term("Xi4c:8", "r2", [_kernel("middle", "r2"), _kernel("v1", ROOT), _kernel("top", ROOT)],
              ("r2", "top", "middle", "v1")),
        _term("Xi4c:9", "r2", [_kernel("middle", "r2"), _kernel("v1", "middle"), _kernel("top", ROOT)],
              ("v1", "top", "middle", "r2")),
    )


def mergeable_example() -> ElementaryGraph:
    """Closed graph whose two (3, −1) edges can be merged into one 4-vertex cumulant."""
    return _elementary(
        "merge-example",
        ["a", "b", "c", "d", "f"],
        "a",
        [
            _test("a"),
            _derivative("b", "a"),
            _derivative("c", ROOT),
            _derivative("d", "a"),
            _derivative("f", ROOT),
            _pair("b", "c", EdgeKind.CONTRACTION),
            _pair("d", "f", EdgeKind.CONTRACTION),
        ],
    )


@dataclass(frozen=True)
class DiagramEdge:
    """Kernel P(z_head − z_tail); ``renormalized`` marks P·𝔠₂ − C^{Xi2} δ."""

    tail: str
    head: str
    renormalized: bool = False


@dataclass(frozen=True)
class ConstantDiagram:
    name: str
    vertices: Tuple[str, ...]
    edges: Tuple[DiagramEdge, ...]
    cumulants: Tuple[Tuple[str, ...], ...]
    feeds: str
    formula: str = ""

    @property
    def max_order(self) -> int:
        return max(len(c) for c in self.cumulants)

    def tree_order(self) -> List[Tuple[DiagramEdge, str, str]]:
        """Edges in breadth-first order from 0, as (edge, placed end, new end)."""
        placed = {ROOT}
        order: List[Tuple[DiagramEdge, str, str]] = []
        pending = list(self.edges)
        while pending:
            for e in pending:
                if e.tail in placed and e.head not in placed:
                    order.append((e, e.tail, e.head))
                    placed.add(e.head)
                elif e.head in placed and e.tail not in placed:
                    order.append((e, e.head, e.tail))
                    placed.add(e.tail)
                else:
                    continue
                pending.remove(e)
                break
            else:
                raise ValidationError(f"diagram {self.name} is not a tree rooted at 0")
        return order


def _diagram(name: str, feeds: str, formula: str, edges: List[Tuple[str, str, bool]],
             cumulants: List[Tuple[str, ...]]) -> ConstantDiagram:
    vertices = sorted({v for t, h, _ in edges for v in (t, h)} - {ROOT})
    return ConstantDiagram(
        name=name,
        vertices=tuple(vertices),
        edges=tuple(DiagramEdge(t, h, r) for t, h, r in edges),
        cumulants=tuple(cumulants),
        feeds=feeds,
        formula=formula,
    )


CONSTANT_DIAGRAMS: Dict[str, ConstantDiagram] = {
    d.name: d
    for d in (
        _diagram("Xi2", "C1", "∫ P(−z) c2(z, 0)", [("z", ROOT, False)], [("z", ROOT)]),
        _diagram("Xi3", "C2", "∫∫ P(z2 − z1) P(−z2) c3(z1, z2, 0)",
                 [("z1", "z2", False), ("z2", ROOT, False)], [("z1", "z2", ROOT)]),
        _diagram("Xi3b", "C3", "∫∫ P(−z1) P(−z2) c3(z1, z2, 0)",
                 [("z1", ROOT, False), ("z2", ROOT, False)], [("z1", "z2", ROOT)]),
        _diagram("Xi4_1", "c2", "∫ P(z3 − z1) P(z2 − z3) P(−z2) c2(z1, z2) c2(z3, 0)",
                 [("z1", "z3", False), ("z3", "z2", False), ("z2", ROOT, False)],
                 [("z1", "z2"), ("z3", ROOT)]),
        _diagram("Xi4_2", "c2", "∫ P(ul − ur) Q(dl − ul) P(−dl) c2(ur, 0)",
                 [("ur", "ul", False), ("ul", "dl", True), ("dl", ROOT, False)], [("ur", ROOT)]),
        _diagram("Xi4_3", "c2", "∫ P(ul − dl) P(ur − ul) P(−ur) c4(dl, ul, ur, 0)",
                 [("dl", "ul", False), ("ul", "ur", False), ("ur", ROOT, False)],
                 [("dl", "ul", "ur", ROOT)]),
        _diagram("Xi4e_1", "c4", "∫ P(ur − ul) P(dl − ur) P(dl) c2(ul, dl) c2(ur, 0)",
                 [("ul", "ur", False), ("ur", "dl", False), (ROOT, "dl", False)],
                 [("ul", "dl"), ("ur", ROOT)]),
        _diagram("Xi4e_2", "c4", "∫ P(ul − ur) Q(dl − ul) P(dl) c2(ur, 0)",
                 [("ur", "ul", False), ("ul", "dl", True), (ROOT, "dl", False)], [("ur", ROOT)]),
        _diagram("Xi4e_3", "c4", "∫ P(ul − dl) P(−ul) P(−dr) c4(dl, ul, dr, 0)",
                 [("dl", "ul", False), ("ul", ROOT, False), ("dr", ROOT, False)],
                 [("dl", "ul", "dr", ROOT)]),
        _diagram("Xi4b", "c1", "∫ P(−z1) P(−z2) P(−z3) c4(z1, z2, z3, 0)",
                 [("z1", ROOT, False), ("z2", ROOT, False), ("z3", ROOT, False)],
                 [("z1", "z2", "z3", ROOT)]),
        _diagram("Xi4c", "c3", "∫ P(dl) P(−ul) P(−dr) c4(dl, ul, dr, 0)",
                 [(ROOT, "dl", False), ("ul", ROOT, False), ("dr", ROOT, False)],
                 [("dl", "ul", "dr", ROOT)]),
    )
}


@dataclass(frozen=True)
class GraphLibrary(Mapping[str, Tuple[ElementaryGraph, ...]]):
    """Symbol name → elementary graphs of its new moment terms, plus the constant diagrams."""

    graphs: Dict[str, Tuple[ElementaryGraph, ...]]
    coefficients: Dict[str, Tuple[int, ...]]
    diagrams: Dict[str, ConstantDiagram] = field(default_factory=lambda: dict(CONSTANT_DIAGRAMS))

    def __post_init__(self) -> None:
        for name, graphs in self.graphs.items():
            if len(self.coefficients.get(name, ())) != len(graphs):
                raise ValidationError(f"symbol {name} needs one coefficient per graph")

    def __getitem__(self, name: str) -> Tuple[ElementaryGraph, ...]:
        return self.graphs[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self.graphs)

    def __len__(self) -> int:
        return len(self.graphs)

    def all_graphs(self) -> List[ElementaryGraph]:
        return [g for graphs in self.graphs.values() for g in graphs]

    def find(self, graph_name: str) -> ElementaryGraph:
        for g in self.all_graphs():
            if g.name == graph_name:
                return g
        if graph_name == "merge-example":
            return mergeable_example()
        raise ValidationError(f"unknown library graph {graph_name!r}")


def builtin_graph_library() -> GraphLibrary:
    return GraphLibrary(
        graphs={
            "Xi": _xi(),
            "Xi2": _xi2(),
            "Xi3": _xi3(),
            "Xi3b": _xi3b(),
            "Xi4": _xi4(),
            "Xi4e": _xi4e(),
            "Xi4b": _xi4b(),
            "Xi4c": _xi4c(),
        },
        coefficients={
            "Xi": (1,),
            "Xi2": (1, 1),
            "Xi3": (-1, -1),
            "Xi3b": (-2, 1),
            "Xi4": (-1, -1, 1, 1, 1, -1, -1, -1),
            "Xi4e": (1, -1, -1, 1, -1, -1, 1),
            "Xi4b": (1, -6, 3, -3, 3, -1),
            "Xi4c": (2, -2, -2, -2, 1, -2, 1, 1, -2),
        },
    )
