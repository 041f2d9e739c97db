"""
Coalescence trees, the η̃ weights of a labeled hypergraph over a tree, the
multiclustering conditions, and sampled estimates of cumulant norms.

A tree's leaves are vertex names; inner nodes are integers and carry integer
scale labels that never decrease going away from the root.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate
from scipy.cluster.hierarchy import linkage
from scipy.spatial.distance import pdist, squareform

from .exceptions import DegenerateConfigurationError, DomainError, NumericalError, ValidationError
from .graphs.checker import CheckReport, Violation
from .graphs.hypergraph import ROOT, Edge2, LabeledHypergraph
from .homogeneity import ZERO, Homogeneity, HomogeneityLike, total
from .symbols import indices_below

logger = logging.getLogger(__name__)

Node = Union[int, str]
DEFAULT_TOLERANCE = 2
PARABOLIC_SCALING = (2, 1)


def parabolic_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Σ_i |u_i − v_i|^{1/s_i} for the scaling s = (2, 1)."""
    return float(math.sqrt(abs(u[0] - v[0])) + abs(u[1] - v[1]))


@dataclass
class CoalescenceTree:
    """Rooted binary tree; ``children[v]`` holds the two children of inner node v."""

    children: Dict[int, Tuple[Node, Node]]
    labels: Dict[int, int] = field(default_factory=dict)
    root: int = 0

    def __post_init__(self) -> None:
        self._parent: Dict[Node, int] = {}
        for v, pair in self.children.items():
            for c in pair:
                self._parent[c] = v
        self._leaves: Dict[Node, FrozenSet[str]] = {}
        if not self.labels:
            self.labels = {v: self.depth(v) for v in self.children}

    @property
    def inner_nodes(self) -> List[int]:
        return sorted(self.children)

    def parent(self, v: Node) -> Optional[int]:
        return self._parent.get(v)

    def depth(self, v: Node) -> int:
        d = 0
        while v != self.root:
            v = self._parent[v]
            d += 1
        return d

    def leaves(self, v: Optional[Node] = None) -> FrozenSet[str]:
        if v is None:
            v = self.root
        if isinstance(v, str):
            return frozenset((v,))
        if v not in self._leaves:
            left, right = self.children[v]
            self._leaves[v] = self.leaves(left) | self.leaves(right)
        return self._leaves[v]

    def ancestors(self, v: Node) -> List[int]:
        """Inner nodes from ``v`` (inclusive when inner) up to the root."""
        path: List[int] = [v] if isinstance(v, int) else []
        while v != self.root:
            v = self._parent[v]
            path.append(v)
        return path

    def lca(self, members: Iterable[str]) -> int:
        members = list(members)
        common = set(self.ancestors(members[0]))
        for m in members[1:]:
            common &= set(self.ancestors(m))
        return max(common, key=self.depth)

    def subtree(self, v: int) -> List[int]:
        found = [v]
        for c in self.children[v]:
            if isinstance(c, int):
                found.extend(self.subtree(c))
        return found

    def is_monotone(self) -> bool:
        return all(
            self.labels[c] >= self.labels[v]
            for v, pair in self.children.items()
            for c in pair
            if isinstance(c, int)
        )

    def contains(self, points: Mapping[str, Sequence[float]], c: int = DEFAULT_TOLERANCE) -> bool:
        """Whether the configuration lies in D(T, ℓ) up to the factor 2^{±c}."""
        names = sorted(self.leaves())
        for a, b in itertools.combinations(names, 2):
            d = parabolic_distance(np.asarray(points[a], float), np.asarray(points[b], float))
            ell = self.labels[self.lca((a, b))]
            if not 2.0 ** (-ell - c) <= d <= 2.0 ** (-ell + c):
                return False
        return True


def build_coalescence_tree(points: Mapping[str, Sequence[float]], c: int = DEFAULT_TOLERANCE) -> CoalescenceTree:
    """Single-linkage clustering in the parabolic metric with labels ⌊−log₂ d⌋.

    d is the merge height, i.e. the closest pair split at the node. The label
    is lowered when the farthest split pair would exceed 2^{−ℓ+c}, then raised
    to its parent's label. The result always lies in D(T, ℓ) up to 2^{±c};
    configurations whose scales spread too far for ``c`` (long chains of
    equally spaced points, for instance) raise DegenerateConfigurationError.
    """
    if c < 0:
        raise ValidationError("tolerance c must be non-negative")
    names = list(points)
    if len(names) < 2:
        raise ValidationError("a coalescence tree needs at least two points")
    coords = np.array([points[n] for n in names], dtype=float)
    dist = pdist(coords, metric=parabolic_distance)
    if np.any(dist <= 0.0):
        raise DegenerateConfigurationError("coincident points have no finite scale")
    square = squareform(dist)
    z = linkage(dist, method="single")
    n = len(names)
    index = {name: k for k, name in enumerate(names)}
    children: Dict[int, Tuple[Node, Node]] = {}
    labels: Dict[int, int] = {}

    def node(k: int) -> Node:
        return names[k] if k < n else k - n

    for i, (a, b, _, _) in enumerate(z):
        children[i] = (node(int(a)), node(int(b)))
    tree = CoalescenceTree(children, {i: 0 for i in children}, root=len(z) - 1)
    for i, (_, _, height, _) in enumerate(z):
        left, right = (sorted(index[m] for m in tree.leaves(ch)) for ch in children[i])
        farthest = float(square[np.ix_(left, right)].max())
        labels[i] = min(int(math.floor(-math.log2(height))), int(math.floor(c - math.log2(farthest))))
    for v in sorted(children, key=tree.depth):
        parent = tree.parent(v)
        tree.labels[v] = labels[v] if parent is None else max(labels[v], tree.labels[parent])
    if not tree.contains(points, c):
        raise DegenerateConfigurationError(
            f"pair distances spread over more than 2^{2 * c} at one scale; increase the tolerance c"
        )
    logger.debug("coalescence tree over %d points, root scale %d", n, tree.labels[tree.root])
    return tree


def _shapes(leaves: Sequence[str]) -> Iterator[object]:
    if len(leaves) == 1:
        yield leaves[0]
        return
    *rest, last = leaves
    for shape in _shapes(rest):
        yield from _insert(shape, last)


def _insert(shape: object, leaf: str) -> Iterator[object]:
    yield (shape, leaf)
    if isinstance(shape, tuple):
        left, right = shape
        for sub in _insert(left, leaf):
            yield (sub, right)
        for sub in _insert(right, leaf):
            yield (left, sub)


def _from_shape(shape: object) -> CoalescenceTree:
    children: Dict[int, Tuple[Node, Node]] = {}

    def walk(s: object) -> Node:
        if isinstance(s, str):
            return s
        left, right = s  # type: ignore[misc]
        idx = len(children)
        children[idx] = ("", "")
        children[idx] = (walk(left), walk(right))
        return idx

    root = walk(shape)
    assert isinstance(root, int)
    return CoalescenceTree(children, root=root)


def enumerate_tree_topologies(leaves: Sequence[str]) -> Iterator[CoalescenceTree]:
    """All (2n − 3)!! rooted binary trees over ``leaves``, labeled by depth."""
    if len(leaves) < 2:
        raise ValidationError("need at least two leaves")
    for shape in _shapes(list(leaves)):
        yield _from_shape(shape)


def random_tree(leaves: Sequence[str], rng: np.random.Generator, labels: Tuple[int, int] = (0, 8)) -> CoalescenceTree:
    """Random topology by leaf insertion with random monotone labels in ``labels``."""
    order = [leaves[i] for i in rng.permutation(len(leaves))]
    shape: object = order[0]
    for leaf in order[1:]:
        options = list(_insert(shape, leaf))
        shape = options[int(rng.integers(len(options)))]
    tree = _from_shape(shape)
    low, high = labels
    for v in sorted(tree.children, key=tree.depth):
        parent = tree.parent(v)
        floor = low if parent is None else tree.labels[parent]
        tree.labels[v] = int(rng.integers(floor, max(floor, high) + 1))
    return tree


@dataclass(frozen=True)
class EtaResult:
    values: Dict[int, Homogeneity]
    total: Homogeneity


def eta_tilde(graph: LabeledHypergraph, tree: CoalescenceTree) -> EtaResult:
    """η̃(v) = |s| + Σ_e η̃_e(v) on the inner nodes of ``tree``."""
    if tree.leaves() != frozenset(graph.vertices):
        raise DomainError("tree leaves must be exactly the graph's vertices")
    eta: Dict[int, Homogeneity] = {v: graph.s_norm for v in tree.inner_nodes}

    def add(v: int, amount: HomogeneityLike) -> None:
        eta[v] = eta[v] + amount

    for e in graph.all_edges():
        up = tree.lca(e.members)
        add(up, -e.label.a)
        if not isinstance(e, Edge2):
            continue
        r = e.label.r
        depth_up = tree.depth(up)
        if r > 0:
            plus = tree.lca((e.head, ROOT)) if e.head != ROOT else None
            if plus is not None and tree.depth(plus) > depth_up and up in tree.ancestors(plus):
                add(plus, r)
                add(up, -r)
            minus = tree.lca((e.tail, ROOT)) if e.tail != ROOT else None
            if minus is not None and tree.depth(minus) > depth_up and up in tree.ancestors(minus):
                shift = Homogeneity(1 - r) - e.label.a
                add(minus, shift)
                add(up, -shift)
        elif r < 0 and up != tree.root and tree.leaves(up) == e.members:
            parent = tree.parent(up)
            assert parent is not None
            add(up, -r)
            add(parent, r)
    return EtaResult(eta, total(list(eta.values())))


def eta_total_identity(graph: LabeledHypergraph) -> Homogeneity:
    """|s|(|V| − 1) − Σ_e a_e."""
    return Homogeneity(graph.s * (len(graph.vertices) - 1)) - graph.total_degree()


def check_multiclustering(
    tree: CoalescenceTree,
    eta: Mapping[int, HomogeneityLike],
    v_star: int,
) -> CheckReport:
    """Condition 1: Σ_{v ≥ u} η(v) > 0 for every inner u.
    Condition 2: Σ_{v ≱ u} η(v) < 0 for every u on the path from v★ up to, not including, the root.
    """
    values = {v: Homogeneity.of(eta[v]) for v in tree.inner_nodes}
    grand = total(list(values.values()))
    violations: List[Violation] = []
    for u in tree.inner_nodes:
        inside = total([values[v] for v in tree.subtree(u)])
        subset = tuple(sorted(tree.leaves(u)))
        if not inside > ZERO:
            violations.append(Violation(1, subset, inside, ZERO, ">"))
    for u in tree.ancestors(v_star):
        if u == tree.root:
            continue
        outside = grand - total([values[v] for v in tree.subtree(u)])
        if not outside < ZERO:
            violations.append(Violation(2, tuple(sorted(tree.leaves(u))), outside, ZERO, "<"))
    return CheckReport(
        mode="multiclustering",
        passed=not violations,
        violations=violations,
        total_violations=len(violations),
        subsets_checked=len(values),
    )


def multiclustering_for(graph: LabeledHypergraph, tree: CoalescenceTree) -> CheckReport:
    result = eta_tilde(graph, tree)
    return check_multiclustering(tree, result.values, tree.lca(sorted(graph.vstar)))


def _parabolic_offsets(rng: np.random.Generator, radius: np.ndarray) -> np.ndarray:
    u = rng.uniform(0.0, 1.0, size=radius.shape)
    signs = rng.choice([-1.0, 1.0], size=radius.shape + (2,))
    t = signs[..., 0] * (u * radius) ** 2
    x = signs[..., 1] * (1.0 - u) * radius
    return np.stack([t, x], axis=-1)


def sample_configurations(tree: CoalescenceTree, rng: np.random.Generator, count: int) -> Tuple[List[str], np.ndarray]:
    """Configurations in D(T, ℓ): the second child of each inner node sits at distance 2^{−ℓ}."""
    names = sorted(tree.leaves())
    index = {n: i for i, n in enumerate(names)}
    pts = np.zeros((count, len(names), 2))
    pts += rng.uniform(-1.0, 1.0, size=(count, 1, 2))
    for v in sorted(tree.inner_nodes, key=tree.depth):
        _, right = tree.children[v]
        shift = _parabolic_offsets(rng, np.full(count, 2.0 ** (-tree.labels[v])))
        for leaf in tree.leaves(right):
            pts[:, index[leaf], :] += shift
    return names, pts


@dataclass(frozen=True)
class NormEstimate:
    estimate: float
    n: int
    alpha: float
    samples: int
    integral: Optional[float] = None
    worst_label: Optional[int] = None


def _guard(values: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise NumericalError("kernel evaluation returned non-finite values")
    return values


def _derivative(kappa: Callable[[np.ndarray], np.ndarray], x: np.ndarray, k0: int, k1: int, h: np.ndarray) -> np.ndarray:
    """Central finite difference D_t^{k0} D_x^{k1} κ at points x of shape (m, 2)."""
    total_ = np.zeros(x.shape[0])
    for j0 in range(k0 + 1):
        for j1 in range(k1 + 1):
            coeff = (-1) ** (j0 + j1) * math.comb(k0, j0) * math.comb(k1, j1)
            shifted = x.copy()
            shifted[:, 0] += (k0 / 2 - j0) * h[:, 0]
            shifted[:, 1] += (k1 / 2 - j1) * h[:, 1]
            total_ += coeff * kappa(shifted)
    return total_ / (h[:, 0] ** k0 * h[:, 1] ** k1)


def kernel_norm_estimate(
    kappa: Callable[[np.ndarray], np.ndarray],
    n: int,
    alpha: float,
    budget: int,
    order: int = 0,
    *,
    seed: int = 0,
    labels: Tuple[int, int] = (0, 8),
    extent: Tuple[float, float] = (4.0, 4.0),
) -> NormEstimate:
    """Lower bound on ‖κ_n‖_α from sampled labeled trees and configurations.

    For n > 2, ``kappa`` takes points of shape (m, n, 2). For n = 2 it takes
    differences of shape (m, 2); the integral term is computed by quadrature
    over [−T, T] × [−X, X] with (T, X) = ``extent``.
    """
    if n < 2:
        raise ValidationError("norms are defined for n >= 2")
    if budget < 1:
        raise ValidationError("budget must be positive")
    rng = np.random.default_rng(seed)
    best = 0.0
    worst_label: Optional[int] = None
    integral_term: Optional[float] = None
    if n == 2:
        t_ext, x_ext = extent
        integral_term, _ = integrate.nquad(
            lambda t, x: float(abs(_guard(np.asarray(kappa(np.array([[t, x]])), float))[0])),
            [[-t_ext, t_ext], [-x_ext, x_ext]],
            opts={"limit": 200},
        )
        best = integral_term
        degrees = [(m.k0, m.k1) for m in indices_below(order + 1)]
        ells = rng.integers(labels[0], labels[1] + 1, size=budget)
        radius = 2.0 ** (-ells.astype(float))
        x = _parabolic_offsets(rng, radius)
        h = np.stack([1e-3 * radius**2, 1e-3 * radius], axis=-1)
        for k0, k1 in degrees:
            vals = np.abs(_guard(_derivative(kappa, x, k0, k1, h)))
            weighted = 2.0 ** (-(alpha + 2 * k0 + k1) * ells) * vals
            i = int(np.argmax(weighted))
            if weighted[i] > best:
                best, worst_label = float(weighted[i]), int(ells[i])
    else:
        leaves = [f"x{i}" for i in range(n)]
        per_tree = max(1, budget // 64)
        drawn = 0
        while drawn < budget:
            tree = random_tree(leaves, rng, labels)
            count = min(per_tree, budget - drawn)
            _, pts = sample_configurations(tree, rng, count)
            vals = np.abs(_guard(np.asarray(kappa(pts), float)))
            weighted = 2.0 ** (-alpha * tree.labels[tree.root]) * vals
            i = int(np.argmax(weighted))
            if weighted[i] > best:
                best, worst_label = float(weighted[i]), tree.labels[tree.root]
            drawn += count
    logger.debug("norm estimate n=%d alpha=%.3g: %.4g over %d samples", n, alpha, best, budget)
    return NormEstimate(best, n, alpha, budget, integral_term, worst_label)
