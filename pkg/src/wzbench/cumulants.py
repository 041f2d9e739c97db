"""
Set partitions, joint cumulants, Wick products and the diagram formula.

All combinatorics are exact; values are whatever the oracles return
(Fractions for the discrete field models used as brute-force references).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import (
    Any,
    Callable,
    Dict,
    FrozenSet,
    Hashable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
    Union,
)

import numpy as np

from .exceptions import OracleError, ResourceLimitError, ValidationError, validate_probabilities

logger = logging.getLogger(__name__)

MAX_GROUND_SET = 12

T = TypeVar("T")
Site = Hashable
Value = Any
MomentOracle = Union[Callable[[Tuple[Site, ...]], Value], Mapping[Tuple[Site, ...], Value]]


def partitions(items: Sequence[T]) -> Iterator[Tuple[Tuple[T, ...], ...]]:
    """Every set partition of the positions of ``items``, each exactly once."""
    n = len(items)
    if n > MAX_GROUND_SET:
        raise ResourceLimitError(f"ground set of size {n} exceeds the cap of {MAX_GROUND_SET}")
    if n == 0:
        yield ()
        return
    labels = [0] * n

    def grow(pos: int, blocks: int) -> Iterator[Tuple[Tuple[T, ...], ...]]:
        if pos == n:
            grouped: List[List[T]] = [[] for _ in range(blocks)]
            for item, label in zip(items, labels):
                grouped[label].append(item)
            yield tuple(tuple(g) for g in grouped)
            return
        for label in range(blocks + 1):
            labels[pos] = label
            yield from grow(pos + 1, max(blocks, label + 1))

    labels[0] = 0
    yield from grow(1, 1)


def bell_number(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
    return row[0]


def multiset_key(sites: Sequence[Site]) -> Tuple[Site, ...]:
    return tuple(sorted(sites, key=repr))


def _lookup(oracle: MomentOracle, sites: Tuple[Site, ...]) -> Value:
    try:
        if isinstance(oracle, Mapping):
            return oracle[sites]
        return oracle(sites)
    except KeyError as exc:
        raise OracleError(f"no moment available for sites {sites!r}") from exc


class CumulantFunctional:
    """Symmetric, memoized joint-cumulant function of multisets of sites."""

    def __init__(self, func: Callable[[Tuple[Site, ...]], Value]):
        self._func = func
        self._memo: Dict[Tuple[Site, ...], Value] = {}

    @classmethod
    def from_table(cls, table: Mapping[Tuple[Site, ...], Value]) -> CumulantFunctional:
        canonical = {multiset_key(k): v for k, v in table.items()}

        def lookup(sites: Tuple[Site, ...]) -> Value:
            if sites not in canonical:
                raise OracleError(f"no cumulant available for sites {sites!r}")
            return canonical[sites]

        return cls(lookup)

    @classmethod
    def from_moments(cls, moments: MomentOracle) -> CumulantFunctional:
        memo: Dict[Tuple[Site, ...], Value] = {}
        return cls(lambda sites: _cumulant(moments, sites, memo))

    def __call__(self, sites: Sequence[Site]) -> Value:
        key = multiset_key(sites)
        if key not in self._memo:
            self._memo[key] = self._func(key)
        return self._memo[key]


def _cumulant(moments: MomentOracle, sites: Tuple[Site, ...], memo: Dict[Tuple[Site, ...], Value]) -> Value:
    key = multiset_key(sites)
    if key in memo:
        return memo[key]
    value = _lookup(moments, key)
    for blocks in partitions(key):
        if len(blocks) == 1:
            continue
        term: Value = 1
        for block in blocks:
            term = term * _cumulant(moments, block, memo)
        value = value - term
    memo[key] = value
    return value


def cumulants_from_moments(moments: MomentOracle, sites: Sequence[Site]) -> Value:
    """Joint cumulant by the moment–cumulant recursion."""
    if not sites:
        raise ValidationError("cumulants need at least one site")
    return _cumulant(moments, multiset_key(sites), {})


def moments_from_cumulants(cumulant: Callable[[Sequence[Site]], Value], sites: Sequence[Site]) -> Value:
    """E Π ζ(z) = Σ_π Π_B 𝔠(B); the empty product has moment 1."""
    total: Value = 0
    for blocks in partitions(tuple(sites)):
        term: Value = 1
        for block in blocks:
            term = term * cumulant(block)
            if term == 0:
                break
        total = total + term
    return total


@dataclass(frozen=True)
class DiscreteFieldModel:
    """Finite joint law of a field on finitely many sites, with exact probabilities."""

    sites: Tuple[Site, ...]
    outcomes: Tuple[Tuple[Fraction, ...], ...]
    probabilities: Tuple[Fraction, ...]
    centered: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "probabilities", tuple(Fraction(p) for p in self.probabilities))
        object.__setattr__(self, "outcomes", tuple(tuple(Fraction(v) for v in o) for o in self.outcomes))
        if len(self.outcomes) != len(self.probabilities):
            raise ValidationError("one probability is required per outcome")
        if any(len(o) != len(self.sites) for o in self.outcomes):
            raise ValidationError("every outcome must assign a value to each site")
        validate_probabilities(self.probabilities)
        if self.centered:
            for k, site in enumerate(self.sites):
                mean = sum((p * o[k] for p, o in zip(self.probabilities, self.outcomes)), Fraction(0))
                if mean != 0:
                    raise ValidationError(f"field is not centered at site {site!r} (mean {mean})")

    @classmethod
    def random(cls, rng: np.random.Generator, n_sites: int, n_outcomes: int = 4, centered: bool = True) -> DiscreteFieldModel:
        weights = [int(w) for w in rng.integers(1, 6, size=n_outcomes)]
        total = sum(weights)
        probabilities = tuple(Fraction(w, total) for w in weights)
        raw = [[Fraction(int(v)) for v in rng.integers(-3, 4, size=n_sites)] for _ in range(n_outcomes)]
        if centered:
            means = [sum((p * o[k] for p, o in zip(probabilities, raw)), Fraction(0)) for k in range(n_sites)]
            raw = [[o[k] - means[k] for k in range(n_sites)] for o in raw]
        return cls(tuple(range(n_sites)), tuple(tuple(o) for o in raw), probabilities, centered)

    def _index(self, site: Site) -> int:
        try:
            return self.sites.index(site)
        except ValueError as exc:
            raise OracleError(f"unknown site {site!r}") from exc

    def moment(self, sites: Sequence[Site]) -> Fraction:
        idx = [self._index(s) for s in sites]
        total = Fraction(0)
        for p, outcome in zip(self.probabilities, self.outcomes):
            value = p
            for k in idx:
                value *= outcome[k]
            total += value
        return total

    def cumulant(self, sites: Sequence[Site]) -> Fraction:
        return cumulants_from_moments(self.moment, sites)

    def cumulant_functional(self) -> CumulantFunctional:
        return CumulantFunctional.from_moments(self.moment)


WickExpansion = Dict[FrozenSet[int], Value]


def wick_expand(sites: Sequence[Site], cumulant: Callable[[Sequence[Site]], Value]) -> WickExpansion:
    """⟨⟨Π_j ζ(sites_j)⟩⟩ as Σ_S coeff_S Π_{j∈S} ζ(sites_j), keyed by position subsets S."""
    if len(sites) > MAX_GROUND_SET:
        raise ResourceLimitError(f"Wick product of {len(sites)} factors exceeds the cap of {MAX_GROUND_SET}")
    memo: Dict[FrozenSet[int], WickExpansion] = {}
    expectations: Dict[FrozenSet[int], Value] = {}

    def expect(positions: FrozenSet[int]) -> Value:
        if positions not in expectations:
            chosen = [sites[j] for j in sorted(positions)]
            expectations[positions] = moments_from_cumulants(cumulant, chosen)
        return expectations[positions]

    def expand(support: FrozenSet[int]) -> WickExpansion:
        if support in memo:
            return memo[support]
        result: WickExpansion = {support: Fraction(1)}
        members = sorted(support)
        for size in range(len(members)):
            for chosen in itertools.combinations(members, size):
                inner = frozenset(chosen)
                weight = expect(support - inner)
                if weight == 0:
                    continue
                for mono, coeff in expand(inner).items():
                    result[mono] = result.get(mono, Fraction(0)) - coeff * weight
        result = {mono: c for mono, c in result.items() if c != 0}
        memo[support] = result
        return result

    return expand(frozenset(range(len(sites))))


def wick_expectation(sites: Sequence[Site], model: DiscreteFieldModel) -> Fraction:
    """Exact expectation of a Wick product under the model's own cumulants."""
    expansion = wick_expand(sites, model.cumulant_functional())
    return sum((c * model.moment([sites[j] for j in sorted(mono)]) for mono, c in expansion.items()), Fraction(0))


def diagram_moment(m: int, p: int, sites: Sequence[Sequence[Site]], cumulant: Callable[[Sequence[Site]], Value]) -> Value:
    """Σ over partitions of the p×m sites whose blocks span at least two rows of Π 𝔠(B)."""
    if len(sites) != p or any(len(row) != m for row in sites):
        raise ValidationError(f"sites must form a {p}×{m} array")
    if p * m > MAX_GROUND_SET:
        raise ResourceLimitError(f"diagram with {p * m} sites exceeds the cap of {MAX_GROUND_SET}")
    cells = [(i, j) for i in range(p) for j in range(m)]
    total: Value = 0
    for blocks in partitions(cells):
        if any(len({i for i, _ in block}) < 2 for block in blocks):
            continue
        term: Value = 1
        for block in blocks:
            term = term * cumulant([sites[i][j] for i, j in block])
            if term == 0:
                break
        total = total + term
    return total


def brute_force_wick_moment(sites: Sequence[Sequence[Site]], model: DiscreteFieldModel) -> Fraction:
    """E Π_i ⟨⟨Π_j ζ(sites_ij)⟩⟩ by expanding every row and averaging over the distribution."""
    functional = model.cumulant_functional()
    expansions = [list(wick_expand(row, functional).items()) for row in sites]
    total = Fraction(0)
    for combo in itertools.product(*expansions):
        coeff = Fraction(1)
        chosen: List[Site] = []
        for (mono, c), row in zip(combo, sites):
            coeff *= c
            chosen.extend(row[j] for j in sorted(mono))
        total += coeff * model.moment(chosen)
    return total


@dataclass(frozen=True)
class DecayReport:
    passed: bool
    worst_ratio: float
    configurations: int


def check_exponential_decay(
    cumulant: Callable[[np.ndarray], np.ndarray],
    configurations: np.ndarray,
    theta: float,
    constant: float,
) -> DecayReport:
    """Check |𝔠(z_1..z_n)| ≤ C θ^{diam(z)} on configurations of shape (m, n, d)."""
    if not 0.0 < theta < 1.0:
        raise ValidationError(f"theta must lie in (0, 1), got {theta}")
    if constant <= 0.0:
        raise ValidationError(f"constant must be positive, got {constant}")
    z = np.asarray(configurations, dtype=float)
    if z.ndim != 3:
        raise ValidationError("configurations must have shape (m, n, d)")
    diffs = z[:, :, None, :] - z[:, None, :, :]
    diam = np.sqrt((diffs**2).sum(axis=-1)).max(axis=(1, 2))
    values = np.abs(np.asarray(cumulant(z), dtype=float))
    ratio = values / (constant * theta**diam)
    worst = float(ratio.max()) if ratio.size else 0.0
    logger.debug("decay check over %d configurations: worst ratio %.3g", z.shape[0], worst)
    return DecayReport(passed=bool(np.all(ratio <= 1.0)), worst_ratio=worst, configurations=int(z.shape[0]))


def roundtrip_mismatches(model: DiscreteFieldModel, order: int = 6) -> List[Tuple[Site, ...]]:
    """Site multisets up to ``order`` where Σ_π Π 𝔠(B) differs from the model's moment."""
    functional = model.cumulant_functional()
    found = []
    for size in range(1, order + 1):
        for sites in itertools.combinations_with_replacement(model.sites, size):
            if moments_from_cumulants(functional, sites) != model.moment(sites):
                found.append(tuple(sites))
    return found


def diagram_formula_mismatches(
    model: DiscreteFieldModel,
    rng: np.random.Generator,
    max_sites: int = 8,
    trials: int = 3,
) -> List[Tuple[int, int]]:
    """(m, p) shapes with p·m ≤ ``max_sites`` where the diagram formula misses the brute-force moment."""
    functional = model.cumulant_functional()
    found = []
    for p in range(2, max_sites + 1):
        for m in range(1, max_sites // p + 1):
            for _ in range(trials):
                rows = [[model.sites[int(k)] for k in rng.integers(len(model.sites), size=m)] for _ in range(p)]
                if diagram_moment(m, p, rows, functional) != brute_force_wick_moment(rows, model):
                    found.append((m, p))
                    break
    logger.debug("diagram formula checked up to %d sites", max_sites)
    return found
