"""
Batched Monte-Carlo driver and proposal distributions.

Batches draw from generators seeded by (seed, batch index) and are reduced
in batch order, so an estimate depends only on its MCConfig.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np
from scipy import stats
from scipy.stats import qmc

from ..models.config import MCConfig

logger = logging.getLogger(__name__)

BatchFn = Callable[[np.random.Generator, int], np.ndarray]


@dataclass(frozen=True)
class MCEstimate:
    value: float
    stderr: float
    n: int
    method: str
    seed: int
    budget: int
    noisy: bool = False

    def within(self, target: float, sigmas: float = 3.0) -> bool:
        return abs(self.value - target) <= sigmas * self.stderr

    def to_dict(self) -> Dict[str, object]:
        return asdict(self)


def uniforms(rng: np.random.Generator, n: int, dim: int, sampler: str = "importance") -> np.ndarray:
    """Uniforms on [0, 1)^dim; the stratified sampler uses a Latin hypercube."""
    if sampler == "stratified":
        return qmc.LatinHypercube(d=dim, seed=rng).random(n)
    return rng.random((n, dim))


def run_batches(fn: BatchFn, cfg: MCConfig, method: str = "mc") -> MCEstimate:
    """Mean and standard error of the per-sample values returned by ``fn`` over the batch plan."""
    plan = cfg.batch_plan()

    def one(batch: int) -> Tuple[float, float, int]:
        values = np.asarray(fn(cfg.rng(batch), plan[batch]), dtype=float)
        return float(values.sum()), float((values**2).sum()), int(values.size)

    if cfg.jobs > 1 and len(plan) > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            parts = list(pool.map(one, range(len(plan))))
    else:
        parts = [one(b) for b in range(len(plan))]
    total = sum(p[0] for p in parts)
    squares = sum(p[1] for p in parts)
    n = sum(p[2] for p in parts)
    mean = total / n
    variance = max(squares / n - mean * mean, 0.0)
    stderr = math.sqrt(variance / max(n - 1, 1))
    noisy = stderr > cfg.max_relative_error * abs(mean)
    if noisy:
        logger.warning("%s estimate %.4g has relative error %.2g above %.2g", method, mean, stderr / max(abs(mean), 1e-300), cfg.max_relative_error)
    logger.debug("%s: %d samples in %d batch(es)", method, n, len(plan))
    return MCEstimate(mean, stderr, n, method, cfg.seed, cfg.budget, noisy)


@dataclass(frozen=True)
class HeatProposal:
    """w = (τ, x) with τ ~ Gamma(1/2, θ) and x | τ ~ N(0, 2τ); P(w)/q(w) = √(πθ) τ^{1/2} e^{τ/θ}."""

    theta: float

    def sample(self, u: np.ndarray) -> np.ndarray:
        """Map uniforms of shape (n, 2) to increments of shape (n, 2)."""
        eps = np.finfo(float).tiny
        tau = stats.gamma.ppf(np.clip(u[:, 0], eps, 1 - 1e-16), a=0.5, scale=self.theta)
        tau = np.maximum(tau, eps)
        x = stats.norm.ppf(np.clip(u[:, 1], eps, 1 - 1e-16)) * np.sqrt(2.0 * tau)
        return np.stack([tau, x], axis=-1)

    def heat_ratio(self, w: np.ndarray) -> np.ndarray:
        tau = w[:, 0]
        return np.sqrt(np.pi * self.theta * tau) * np.exp(tau / self.theta)

    def density(self, w: np.ndarray) -> np.ndarray:
        tau, x = w[:, 0], w[:, 1]
        gamma = stats.gamma.pdf(tau, a=0.5, scale=self.theta)
        return gamma * np.exp(-(x**2) / (4.0 * tau)) / np.sqrt(4.0 * np.pi * tau)


@dataclass(frozen=True)
class RadialProposal:
    """Parabolic-radial proposal: r log-uniform on [r_min, r_max], t = ±(u r)², x = ±(1 − u) r."""

    r_min: float
    r_max: float

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        r = self.r_min * (self.r_max / self.r_min) ** rng.random(n)
        u = rng.random(n)
        signs = rng.choice([-1.0, 1.0], size=(n, 2))
        return np.stack([signs[:, 0] * (u * r) ** 2, signs[:, 1] * (1.0 - u) * r], axis=-1)

    def density(self, w: np.ndarray) -> np.ndarray:
        root = np.sqrt(np.abs(w[..., 0]))
        r = root + np.abs(w[..., 1])
        inside = (r >= self.r_min) & (r <= self.r_max) & (root > 0)
        p = 1.0 / (np.where(inside, r, 1.0) * math.log(self.r_max / self.r_min))
        return np.where(inside, p / (8.0 * np.where(inside, root, 1.0) * np.where(inside, r, 1.0)), 0.0)


def sample_mixture(rng: np.random.Generator, proposal: RadialProposal, anchors: List[np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """Draw around a uniformly chosen anchor; return points and the mixture density."""
    n = anchors[0].shape[0]
    choice = rng.integers(len(anchors), size=n)
    stacked = np.stack(anchors, axis=0)
    base = stacked[choice, np.arange(n)]
    points = base + proposal.sample(rng, n)
    density = np.mean([proposal.density(points - a) for a in anchors], axis=0)
    return points, density
