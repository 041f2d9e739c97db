"""
Pydantic models for noise models and simulation experiments.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import TYPE_CHECKING, List, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

if TYPE_CHECKING:
    from ..numerics.shot_noise import ShotNoiseModel


class ShotNoiseSpec(BaseModel):
    """Shot-noise model section."""

    intensity: float = Field(default=1.0, gt=0, description="Poisson intensity per unit space-time volume")
    width_t: float = Field(default=0.5, gt=0, description="Time width of the pulse")
    width_x: float = Field(default=0.5, gt=0, description="Space width of the pulse")
    profile: Literal["gaussian", "exponential"] = Field(default="gaussian", description="Pulse profile")
    marks: Literal["constant", "symmetric", "uniform"] = Field(default="uniform", description="Mark law")
    normalize: bool = Field(default=True, description="Rescale so that ∫ c2 = 1")

    def build(self) -> ShotNoiseModel:
        from ..numerics.shot_noise import MarkLaw, Profile, ShotNoiseModel

        model = ShotNoiseModel(
            intensity=self.intensity,
            width_t=self.width_t,
            width_x=self.width_x,
            profile=Profile(self.profile),
            marks=MarkLaw(self.marks),
        )
        return model.normalized() if self.normalize else model


class GridSpecModel(BaseModel):
    n_space: int = Field(default=64, ge=8, description="Points on the unit circle")
    dt: float = Field(default=2e-4, gt=0, description="Time step")
    horizon: float = Field(default=0.05, gt=0, description="Final time")


class EquationPreset(BaseModel):
    """Coefficient presets by name (see wzbench.wzsim.COEFFICIENT_PRESETS)."""

    H: str = Field(default="zero", description="Drift preset")
    G: str = Field(default="linear", description="Noise coefficient preset")
    initial: str = Field(default="zero", description="Initial condition preset")


class ExperimentConfig(BaseModel):
    """Simulation experiment read from a JSON file."""

    model_config = ConfigDict(validate_assignment=True)

    grid: GridSpecModel = Field(default_factory=GridSpecModel)
    eps: List[float] = Field(default_factory=lambda: [0.1, 0.05, 0.025], min_length=1)
    replicas: int = Field(default=20, ge=1)
    equation: EquationPreset = Field(default_factory=EquationPreset)
    model: ShotNoiseSpec = Field(default_factory=ShotNoiseSpec)
    seed: int = Field(default=0, ge=0)
    divergence_threshold: float = Field(default=1e6, gt=0)
    constants_budget: int = Field(default=2**15, ge=1, description="MC budget for the renormalization constants")

    @field_validator("eps")
    @classmethod
    def validate_eps(cls, v: List[float]) -> List[float]:
        """ε values must lie in (0, 1] and decrease."""
        if any(not 0 < e <= 1 for e in v):
            raise ValueError("every ε must lie in (0, 1]")
        if any(b >= a for a, b in zip(v, v[1:])):
            raise ValueError("ε list must be strictly decreasing")
        return v

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> ExperimentConfig:
        return cls.model_validate(json.loads(Path(path).read_text(encoding="utf-8")))
