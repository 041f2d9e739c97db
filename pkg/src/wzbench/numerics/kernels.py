"""
Heat kernel, smooth cutoffs, and the truncated kernel K.

K agrees with the heat kernel on |z|_s < 1/2, vanishes on |z|_s > 1 and
kills every polynomial of scaled degree below 3.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import integrate, linalg

from ..exceptions import ValidationError

logger = logging.getLogger(__name__)

ArrayLike = np.ndarray
MONOMIALS: Tuple[Tuple[int, int], ...] = ((0, 0), (0, 1), (0, 2), (1, 0))
Y_CAP = 40.0


def parabolic_norm(t: ArrayLike, x: ArrayLike) -> ArrayLike:
    return np.sqrt(np.abs(t)) + np.abs(x)


def heat_kernel(t: ArrayLike, x: ArrayLike) -> ArrayLike:
    """P(t, x) = (4πt)^{−1/2} exp(−x²/4t) for t > 0, else 0."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    positive = t > 0
    safe = np.where(positive, t, 1.0)
    value = np.exp(-(x**2) / (4.0 * safe)) / np.sqrt(4.0 * np.pi * safe)
    return np.where(positive, value, 0.0)


@dataclass(frozen=True)
class HeatKernel:
    """Heat kernel on the line, or on the circle of length ``period`` by images."""

    period: Optional[float] = None
    n_images: int = 8

    def __call__(self, t: ArrayLike, x: ArrayLike) -> ArrayLike:
        if self.period is None:
            return heat_kernel(t, x)
        x = np.asarray(x, dtype=float)
        total = np.zeros(np.broadcast(np.asarray(t), x).shape)
        for m in range(-self.n_images, self.n_images + 1):
            total = total + heat_kernel(t, x + m * self.period)
        return total


def _smooth_step(u: ArrayLike) -> ArrayLike:
    """C^∞ step: 0 for u ≤ 0, 1 for u ≥ 1."""
    u = np.asarray(u, dtype=float)

    def f(v: ArrayLike) -> ArrayLike:
        return np.where(v > 0, np.exp(-1.0 / np.where(v > 0, v, 1.0)), 0.0)

    a, b = f(u), f(1.0 - u)
    return a / (a + b)


def smooth_cutoff(r: ArrayLike, inner: float = 0.5, outer: float = 1.0) -> ArrayLike:
    """1 for r ≤ inner, 0 for r ≥ outer."""
    return _smooth_step((outer - np.asarray(r, dtype=float)) / (outer - inner))


def bump(u: ArrayLike) -> ArrayLike:
    """exp(−1/(1 − u²)) on |u| < 1."""
    u = np.asarray(u, dtype=float)
    inside = np.abs(u) < 1.0
    safe = np.where(inside, u, 0.0)
    return np.where(inside, np.exp(-1.0 / (1.0 - safe**2)), 0.0)


def homogeneous_kernel(a: float, smoothing: float = 1e-6) -> Callable[[ArrayLike, ArrayLike], ArrayLike]:
    """(|z|_s + δ)^{−a}: a kernel of degree a, smoothed at scale δ."""

    def kernel(t: ArrayLike, x: ArrayLike) -> ArrayLike:
        return (parabolic_norm(t, x) + smoothing) ** (-a)

    return kernel


@dataclass
class TruncatedKernel:
    """K = χ(|z|_s) P(z) + Σ_k c_k z^k ψ(z), with ψ a bump supported in the annulus of χ."""

    inner: float = 0.5
    outer: float = 1.0
    coefficients: np.ndarray = field(default_factory=lambda: np.zeros(len(MONOMIALS)))

    @property
    def _span(self) -> float:
        return self.outer - self.inner

    @property
    def _root_window(self) -> Tuple[float, float]:
        return self.inner + 0.2 * self._span, self.inner + 0.6 * self._span

    @property
    def _x_halfwidth(self) -> float:
        return 0.3 * self._span

    @classmethod
    def build(cls, inner: float = 0.5, outer: float = 1.0) -> TruncatedKernel:
        if not 0.0 < inner < outer:
            raise ValidationError("cutoff radii must satisfy 0 < inner < outer")
        kernel = cls(inner, outer)
        n = len(MONOMIALS)
        gram = np.empty((n, n))
        rhs = np.empty(n)
        for i, ki in enumerate(MONOMIALS):
            rhs[i] = -kernel._cutoff_moment(ki)
            for j, kj in enumerate(MONOMIALS[i:], start=i):
                gram[i, j] = gram[j, i] = kernel._bump_moment((ki[0] + kj[0], ki[1] + kj[1]))
        kernel.coefficients = linalg.solve(gram, rhs, assume_a="sym")
        logger.debug("truncated kernel correction coefficients %s", kernel.coefficients)
        return kernel

    def _psi(self, t: ArrayLike, x: ArrayLike) -> ArrayLike:
        lo, hi = self._root_window
        mid, half = (lo + hi) / 2, (hi - lo) / 2
        t = np.asarray(t, dtype=float)
        root = np.sqrt(np.where(t > 0, t, 0.0))
        return np.where(t > 0, bump((root - mid) / half), 0.0) * bump(np.asarray(x) / self._x_halfwidth)

    def _bump_moment(self, k: Tuple[int, int]) -> float:
        if k[1] % 2:
            return 0.0
        lo, hi = self._root_window
        w = self._x_halfwidth
        value, _ = integrate.dblquad(
            lambda x, t: float(self._psi(t, x)) * t ** k[0] * x ** k[1],
            lo**2, hi**2, -w, w, epsabs=1e-13, epsrel=1e-11,
        )
        return value

    def _cutoff_moment(self, k: Tuple[int, int]) -> float:
        """∫ χ P z^k with x = √t·y."""
        if k[1] % 2:
            return 0.0
        norm = 1.0 / math.sqrt(4.0 * math.pi)

        def integrand(y: float, t: float) -> float:
            chi = float(smooth_cutoff(math.sqrt(t) * (1.0 + abs(y)), self.inner, self.outer))
            return chi * norm * math.exp(-y * y / 4.0) * t ** k[0] * t ** (k[1] / 2) * y ** k[1]

        def ymax(t: float) -> float:
            return min(self.outer / math.sqrt(t), Y_CAP) if t > 0 else Y_CAP

        value, _ = integrate.dblquad(integrand, 0.0, self.outer**2, lambda t: -ymax(t), ymax,
                                     epsabs=1e-13, epsrel=1e-11)
        return value

    def __call__(self, t: ArrayLike, x: ArrayLike) -> ArrayLike:
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        value = smooth_cutoff(parabolic_norm(t, x), self.inner, self.outer) * heat_kernel(t, x)
        psi = self._psi(t, x)
        for c, (k0, k1) in zip(self.coefficients, MONOMIALS):
            value = value + c * t**k0 * x**k1 * psi
        return value

    def moment(self, k: Tuple[int, int]) -> float:
        """∫ K(z) t^{k0} x^{k1} dz by quadrature of the assembled kernel."""

        def integrand(y: float, t: float) -> float:
            root = math.sqrt(t)
            x = root * y
            return root * float(self(t, x)) * t ** k[0] * x ** k[1]

        def ymax(t: float) -> float:
            return min(self.outer / math.sqrt(t), Y_CAP) if t > 0 else Y_CAP

        lo, hi = self._root_window
        pieces = [(0.0, lo**2), (lo**2, hi**2), (hi**2, self.outer**2)]
        value = 0.0
        for a, b in pieces:
            part, _ = integrate.dblquad(integrand, a, b, lambda t: -ymax(t), ymax, epsabs=1e-12, epsrel=1e-10)
            value += part
        return value
