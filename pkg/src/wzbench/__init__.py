"""
wzbench: power-counting and moment-bound workbench for shot-noise Wong–Zakai approximations.

Exact symbolic checks (homogeneities, renormalization maps, labeled-hypergraph
power counting, coalescence trees, cumulant identities) together with
Monte-Carlo evaluation of renormalization constants and generalized
convolutions, and a desk-scale simulation of the renormalized equation.
"""

from .config import BenchConfig, MCConfig
from .exceptions import (
    DomainError,
    FitError,
    GraphValidationError,
    ParseError,
    ResourceLimitError,
    ValidationError,
    WZBenchError,
)
from .graphs import ElementaryGraph, LabeledHypergraph, builtin_graph_library, check_assumption, wick_contract
from .homogeneity import Homogeneity
from .renormalization import RenormalizationConstants, apply_L
from .symbols import homogeneity, parse_symbol

__version__ = "0.3.0"
__all__ = [
    "BenchConfig",
    "MCConfig",
    "WZBenchError",
    "ValidationError",
    "GraphValidationError",
    "ParseError",
    "DomainError",
    "ResourceLimitError",
    "FitError",
    "ElementaryGraph",
    "LabeledHypergraph",
    "builtin_graph_library",
    "check_assumption",
    "wick_contract",
    "Homogeneity",
    "RenormalizationConstants",
    "apply_L",
    "homogeneity",
    "parse_symbol",
]
