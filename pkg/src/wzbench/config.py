"""
Configuration for wzbench.

Re-exports the pydantic models so callers can ``from wzbench.config import BenchConfig``.
"""

from .models.config import DEFAULT_BUDGET, ENV_PREFIX, OUTPUT_FORMATS, BenchConfig, MCConfig

__all__ = ["BenchConfig", "MCConfig", "DEFAULT_BUDGET", "ENV_PREFIX", "OUTPUT_FORMATS"]
