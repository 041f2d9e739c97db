"""
JSON reading and writing of labeled hypergraphs and elementary graphs.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Union

from pydantic import ValidationError as SchemaError

from ..exceptions import ParseError
from ..homogeneity import Homogeneity
from ..models.graph_schema import GraphModel
from .hypergraph import (
    Edge2,
    EdgeKind,
    EdgeLabel,
    ElementaryGraph,
    HyperEdge,
    LabeledHypergraph,
    hyperedge_label,
)

AnyGraph = Union[LabeledHypergraph, ElementaryGraph]


def _label(a: Union[int, list], r: int) -> EdgeLabel:
    value = Homogeneity.from_list(a) if isinstance(a, list) else Homogeneity.of(a)
    return EdgeLabel(value, r)


def _kind(text: str) -> EdgeKind:
    try:
        return EdgeKind(text)
    except ValueError as exc:
        raise ParseError(f"unknown edge kind {text!r}") from exc


def graph_from_model(model: GraphModel) -> AnyGraph:
    edges2 = tuple(
        Edge2(e.tail, e.head, _label(e.a, e.r), _kind(e.kind), e.name) for e in model.edges2
    )
    edges_h = tuple(
        HyperEdge(
            frozenset(h.members),
            hyperedge_label(len(h.members), model.s) if h.a is None else _label(h.a, h.r),
            _kind(h.kind),
            h.name,
        )
        for h in model.edges_h
    )
    graph = LabeledHypergraph(tuple(model.vertices), frozenset(model.vstar), edges2, edges_h, model.s)
    if model.is_elementary:
        return ElementaryGraph(graph, frozenset(model.external or ()), model.special or "", model.name)
    return graph


def parse_graph(data: Union[str, bytes, Dict[str, Any]]) -> AnyGraph:
    """Parse JSON text or a decoded dict. Structural validation is left to the caller."""
    try:
        raw = json.loads(data) if isinstance(data, (str, bytes)) else data
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ParseError("graph document must be a JSON object")
    try:
        model = GraphModel.model_validate(raw)
    except SchemaError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise ParseError(f"invalid graph document at {where}: {first['msg']}") from exc
    return graph_from_model(model)


def load_graph(path: Union[str, Path]) -> AnyGraph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_graph(text)


def _a(value: Homogeneity) -> Union[int, list]:
    if value.q == 0 and value.c.denominator == 1:
        return int(value.c)
    return value.to_list()


def graph_to_dict(graph: AnyGraph) -> Dict[str, Any]:
    inner = graph.graph if isinstance(graph, ElementaryGraph) else graph
    doc: Dict[str, Any] = {
        "s": inner.s,
        "vertices": list(inner.vertices),
        "vstar": sorted(inner.vstar),
        "edges2": [
            {"from": e.tail, "to": e.head, "a": _a(e.label.a), "r": e.label.r, "kind": e.kind.value, "name": e.name}
            for e in inner.edges2
        ],
        "edgesH": [
            {"members": sorted(h.members), "a": _a(h.label.a), "r": h.label.r, "kind": h.kind.value, "name": h.name}
            for h in inner.edges_h
        ],
    }
    if isinstance(graph, ElementaryGraph):
        doc["name"] = graph.name
        doc["external"] = sorted(graph.external)
        doc["special"] = graph.special
    return doc


def dump_graph(graph: AnyGraph, indent: int = 2) -> str:
    return json.dumps(graph_to_dict(graph), indent=indent, ensure_ascii=False)


def save_graph(graph: AnyGraph, path: Union[str, Path]) -> None:
    Path(path).write_text(dump_graph(graph), encoding="utf-8")
