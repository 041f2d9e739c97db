"""
Pydantic models for configuration, graph documents and experiments.
"""

from .config import BenchConfig, MCConfig
from .experiment import EquationPreset, ExperimentConfig, GridSpecModel, ShotNoiseSpec
from .graph_schema import Edge2Model, GraphModel, HyperEdgeModel

__all__ = [
    "BenchConfig",
    "MCConfig",
    "ExperimentConfig",
    "EquationPreset",
    "GridSpecModel",
    "ShotNoiseSpec",
    "Edge2Model",
    "GraphModel",
    "HyperEdgeModel",
]
