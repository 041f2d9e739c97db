"""
Pydantic models for workbench and Monte-Carlo configuration.
"""

from __future__ import annotations

import os
from typing import List, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

DEFAULT_BUDGET = 2**18
OUTPUT_FORMATS = ("json", "csv", "table")
ENV_PREFIX = "WZBENCH_"


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(ENV_PREFIX + name)
    return int(raw) if raw and raw.lstrip("-").isdigit() else default


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(ENV_PREFIX + name)
    try:
        return float(raw) if raw else default
    except ValueError:
        return default


class BenchConfig(BaseModel):
    """Global options shared by every command."""

    model_config = ConfigDict(validate_assignment=True)

    s: int = Field(default=3, ge=1, description="Scaling norm |s|")
    kappa: float = Field(default=0.01, gt=0, lt=0.1, description="Numeric κ used only for display")
    budget: int = Field(default=DEFAULT_BUDGET, ge=1, description="Monte-Carlo sample budget")
    seed: int = Field(default=0, ge=0, description="Master seed for every stochastic command")
    jobs: int = Field(default=1, ge=1, le=256, description="Worker cap")
    format: str = Field(default="table", description="Output format: json, csv or table")
    violation_limit: int = Field(default=1000, ge=1, description="Violations kept per report")

    @field_validator("format")
    @classmethod
    def validate_format(cls, v: str) -> str:
        """Validate the output format."""
        v = v.lower()
        if v not in OUTPUT_FORMATS:
            raise ValueError(f"format must be one of {', '.join(OUTPUT_FORMATS)}")
        return v

    @classmethod
    def from_env(cls) -> BenchConfig:
        """Create configuration from WZBENCH_* environment variables."""
        return cls(
            s=_env_int("S", 3),
            kappa=_env_float("KAPPA", 0.01),
            budget=_env_int("BUDGET", DEFAULT_BUDGET),
            seed=_env_int("SEED", 0),
            jobs=_env_int("JOBS", 1),
            format=os.getenv(ENV_PREFIX + "FORMAT") or "table",
            violation_limit=_env_int("VIOLATION_LIMIT", 1000),
        )

    def mc(self, **overrides: object) -> MCConfig:
        base = {"budget": self.budget, "seed": self.seed, "jobs": self.jobs}
        base.update(overrides)
        return MCConfig(**base)


class MCConfig(BaseModel):
    """Monte-Carlo plan; identical configurations give bit-identical estimates."""

    model_config = ConfigDict(validate_assignment=True)

    budget: int = Field(default=2**16, ge=1, description="Total number of samples")
    seed: int = Field(default=0, ge=0, description="Master seed")
    batch_size: int = Field(default=2**14, ge=1, description="Samples per batch")
    jobs: int = Field(default=1, ge=1, le=256, description="Worker threads")
    proposal_scale: float = Field(default=2.0, gt=0, description="Proposal time scale in units of the noise correlation time")
    sampler: Literal["importance", "stratified"] = Field(default="importance", description="Uniform source")
    max_relative_error: float = Field(default=0.05, gt=0, description="Warn above this stderr/|value|")

    def batch_plan(self) -> List[int]:
        full, rest = divmod(self.budget, self.batch_size)
        return [self.batch_size] * full + ([rest] if rest else [])

    def rng(self, batch: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, batch])
