"""
Pydantic models for the JSON graph format.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

LabelValue = Union[int, List[int]]


def _check_label(v: LabelValue) -> LabelValue:
    if isinstance(v, list) and len(v) not in (2, 4):
        raise ValueError("a must be an integer or a list [num, den] / [num, den, kq_num, kq_den]")
    if isinstance(v, list) and (v[1] == 0 or (len(v) == 4 and v[3] == 0)):
        raise ValueError("a has a zero denominator")
    return v


class Edge2Model(BaseModel):
    """Directed 2-edge."""

    model_config = ConfigDict(populate_by_name=True)

    tail: str = Field(..., alias="from", description="Tail vertex e−")
    head: str = Field(..., alias="to", description="Head vertex e+")
    a: LabelValue = Field(..., description="Kernel degree a_e")
    r: int = Field(default=0, description="Renormalization order r_e")
    kind: str = Field(default="generic", description="Edge kind used for kernel assignment")
    name: str = Field(default="", description="Edge name")

    @field_validator("a")
    @classmethod
    def validate_a(cls, v: LabelValue) -> LabelValue:
        return _check_label(v)


class HyperEdgeModel(BaseModel):
    """Hyperedge carrying a joint cumulant."""

    members: List[str] = Field(..., min_length=3, description="Member vertices")
    a: Optional[LabelValue] = Field(default=None, description="Degree; defaults to |e||s|/2")
    r: int = Field(default=0, description="Must be 0")
    kind: str = Field(default="cumulant", description="Edge kind")
    name: str = Field(default="", description="Edge name")

    @field_validator("a")
    @classmethod
    def validate_a(cls, v: Optional[LabelValue]) -> Optional[LabelValue]:
        return None if v is None else _check_label(v)


class GraphModel(BaseModel):
    """Labeled hypergraph, optionally with elementary-graph fields."""

    model_config = ConfigDict(populate_by_name=True)

    s: int = Field(default=3, ge=1, description="Scaling norm |s|")
    name: str = Field(default="", description="Graph name")
    vertices: List[str] = Field(..., min_length=1, description="Vertex names, including '0'")
    vstar: List[str] = Field(default_factory=lambda: ["0"], description="Distinguished vertices V★")
    edges2: List[Edge2Model] = Field(default_factory=list, description="Directed 2-edges")
    edges_h: List[HyperEdgeModel] = Field(default_factory=list, alias="edgesH", description="Hyperedges")
    external: Optional[List[str]] = Field(default=None, description="External (noise) vertices")
    special: Optional[str] = Field(default=None, description="Special vertex v★")
    model: Dict[str, Any] = Field(default_factory=dict, description="Noise model section")

    @field_validator("vertices")
    @classmethod
    def validate_unique(cls, v: List[str]) -> List[str]:
        """Reject duplicate vertex names."""
        if len(set(v)) != len(v):
            raise ValueError("vertex names must be unique")
        return v

    @property
    def is_elementary(self) -> bool:
        return self.special is not None
