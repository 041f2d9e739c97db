"""
Labeled hypergraphs, elementary graphs, Wick contractions and power-counting checks.
"""

from .checker import CheckReport, Mode, Violation, check_assumption
from .contraction import (
    ContractionPartition,
    ContractionResult,
    enumerate_wick_partitions,
    merge_hyperedges,
    mergeable_pairs,
    normalize_bad_chains,
    wick_contract,
)
from .hypergraph import (
    ROOT,
    Edge2,
    EdgeKind,
    EdgeLabel,
    ElementaryGraph,
    HyperEdge,
    LabeledHypergraph,
    alpha_exponent,
    build_graph,
    edge2,
    hyperedge_label,
)
from .io import dump_graph, graph_to_dict, load_graph, parse_graph, save_graph
from .library import CONSTANT_DIAGRAMS, ConstantDiagram, GraphLibrary, builtin_graph_library, mergeable_example
from .random_graphs import random_elementary_graph

__all__ = [
    "ROOT",
    "Edge2",
    "EdgeKind",
    "EdgeLabel",
    "ElementaryGraph",
    "HyperEdge",
    "LabeledHypergraph",
    "alpha_exponent",
    "build_graph",
    "edge2",
    "hyperedge_label",
    "CheckReport",
    "Mode",
    "Violation",
    "check_assumption",
    "ContractionPartition",
    "ContractionResult",
    "enumerate_wick_partitions",
    "merge_hyperedges",
    "mergeable_pairs",
    "normalize_bad_chains",
    "wick_contract",
    "dump_graph",
    "graph_to_dict",
    "load_graph",
    "parse_graph",
    "save_graph",
    "CONSTANT_DIAGRAMS",
    "ConstantDiagram",
    "GraphLibrary",
    "builtin_graph_library",
    "mergeable_example",
    "random_elementary_graph",
]
