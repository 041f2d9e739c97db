"""
Brute-force verification suites for the power-counting results.

Every suite returns a SuiteResult listing the instances checked and any
counterexamples; nothing here raises on a failed claim.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from .exceptions import DomainError, ValidationError
from .graphs.checker import Mode, check_assumption
from .graphs.contraction import (
    ContractionPartition,
    ContractionResult,
    enumerate_wick_partitions,
    merge_hyperedges,
    mergeable_pairs,
    wick_contract,
)
from .graphs.hypergraph import ElementaryGraph
from .graphs.library import GraphLibrary, builtin_graph_library, mergeable_example
from .graphs.random_graphs import random_elementary_graph
from .trees import enumerate_tree_topologies, eta_tilde, eta_total_identity, multiclustering_for, random_tree

logger = logging.getLogger(__name__)

SUITES = ("library", "contractions", "reduction", "converse", "equivalence", "merging", "eta-total", "multiclustering")


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    skipped: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, object]:
        return {
            "suite": self.name,
            "pass": self.passed,
            "checked": self.checked,
            "skipped": self.skipped,
            "failures": list(self.failures),
        }


@dataclass
class TheoremReport:
    suites: List[SuiteResult]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def to_dict(self) -> Dict[str, object]:
        return {"pass": self.passed, "suites": [s.to_dict() for s in self.suites]}

    def to_table(self) -> str:
        lines = [f"{'suite':<16} {'status':<6} {'checked':>8} {'skipped':>8}"]
        for s in self.suites:
            lines.append(f"{s.name:<16} {'PASS' if s.passed else 'FAIL':<6} {s.checked:>8} {s.skipped:>8}")
            lines.extend(f"    {f}" for f in s.failures[:10])
        return "\n".join(lines)


def symmetric_pairing(h: ElementaryGraph) -> ContractionPartition:
    """π pairing x#1 with x#2 for every external x."""
    return ContractionPartition(tuple(((1, x), (2, x)) for x in sorted(h.external)))


def _passes(graph: object, mode: Mode) -> bool:
    return check_assumption(graph, mode).passed  # type: ignore[arg-type]


def library_pass(library: Optional[GraphLibrary] = None) -> SuiteResult:
    result = SuiteResult("library")
    for h in (library or builtin_graph_library()).all_graphs():
        result.checked += 1
        report = check_assumption(h, Mode.ELEMENTARY)
        if not report.passed:
            result.failures.append(f"{h.name}: items {report.failed_items}")
    return result


def contraction_theorem(graphs: Iterable[ElementaryGraph], powers: Sequence[int] = (2, 3)) -> SuiteResult:
    """Reduced p-fold contractions of graphs passing the elementary check pass the big check."""
    result = SuiteResult("contractions")
    for h in graphs:
        if not _passes(h, Mode.ELEMENTARY):
            result.skipped += 1
            continue
        for p in powers:
            for pi in enumerate_wick_partitions(h.external, p):
                result.checked += 1
                contracted = wick_contract(h, p, pi, reduce=True)
                report = check_assumption(contracted.graph, Mode.BIG)
                if not report.passed:
                    result.failures.append(f"{h.name} p={p} [{pi}]: items {report.failed_items}")
        logger.debug("contractions of %s checked", h.name)
    return result


def _reduction_premise(contracted: ContractionResult) -> bool:
    full = contracted.graph
    if not check_assumption(full, Mode.BIG, items=(1, 3, 4)).passed:
        return False
    return check_assumption(full, Mode.BIG, items=(2,), excluded_subsets=contracted.bad_chains()).passed


def reduction_lemma(graphs: Iterable[ElementaryGraph], powers: Sequence[int] = (2,)) -> SuiteResult:
    """Per instance: the unreduced contraction passing away from bad chains implies the reduced one passes."""
    result = SuiteResult("reduction")
    for h in graphs:
        for p in powers:
            for pi in enumerate_wick_partitions(h.external, p):
                full = wick_contract(h, p, pi, reduce=False)
                if not _reduction_premise(full):
                    result.skipped += 1
                    continue
                result.checked += 1
                if not _passes(wick_contract(h, p, pi, reduce=True).graph, Mode.BIG):
                    result.failures.append(f"{h.name} p={p} [{pi}]")
    return result


def converse_lemma(graphs: Iterable[ElementaryGraph]) -> SuiteResult:
    """A graph whose reduced symmetric pairing passes the big check passes the elementary check."""
    result = SuiteResult("converse")
    for h in graphs:
        if not h.external:
            result.skipped += 1
            continue
        paired = wick_contract(h, 2, symmetric_pairing(h), reduce=True)
        if not _passes(paired.graph, Mode.BIG):
            result.skipped += 1
            continue
        result.checked += 1
        if not _passes(h, Mode.ELEMENTARY):
            result.failures.append(f"{h.name}: pairing passes but the elementary check fails")
    return result


def equivalence_lemma(graphs: Iterable[ElementaryGraph]) -> SuiteResult:
    """Without external vertices both checkers return the same verdict on the same subsets."""
    result = SuiteResult("equivalence")
    for h in graphs:
        if h.external:
            result.skipped += 1
            continue
        result.checked += 1
        big = check_assumption(h, Mode.BIG)
        small = check_assumption(h, Mode.ELEMENTARY)
        key_big = sorted((v.item, v.subset) for v in big.violations)
        key_small = sorted((v.item, v.subset) for v in small.violations)
        if big.passed != small.passed or key_big != key_small:
            result.failures.append(f"{h.name}: big {big.passed} / elementary {small.passed}")
    return result


def merging_lemma(graphs: Iterable[ElementaryGraph]) -> SuiteResult:
    """Merging two mergeable edges of a passing graph keeps it passing."""
    result = SuiteResult("merging")
    for h in graphs:
        if not _passes(h, Mode.ELEMENTARY):
            continue
        for first, second in mergeable_pairs(h):
            try:
                merged = merge_hyperedges(h, first, second)
            except DomainError:
                result.skipped += 1
                continue
            result.checked += 1
            if not _passes(merged, Mode.ELEMENTARY):
                result.failures.append(f"{h.name}: merging edges {first} and {second} breaks the check")
    return result


def eta_total(graphs: Iterable[ElementaryGraph], rng: np.random.Generator, trees_per_graph: int = 10) -> SuiteResult:
    """Σ_v η̃(v) = |s|(|V| − 1) − Σ_e a_e on random trees."""
    result = SuiteResult("eta-total")
    for h in graphs:
        g = h.graph
        expected = eta_total_identity(g)
        for _ in range(trees_per_graph):
            result.checked += 1
            got = eta_tilde(g, random_tree(list(g.vertices), rng)).total
            if got != expected:
                result.failures.append(f"{h.name}: Σ η̃ = {got}, expected {expected}")
    return result


def multiclustering_suite(graphs: Iterable[ElementaryGraph], powers: Sequence[int] = (2, 3), max_leaves: int = 7) -> SuiteResult:
    """Reduced contractions passing the big check satisfy both multiclustering conditions on every tree."""
    result = SuiteResult("multiclustering")
    for h in graphs:
        for p in powers:
            for pi in enumerate_wick_partitions(h.external, p):
                g = wick_contract(h, p, pi, reduce=True).graph
                if len(g.vertices) > max_leaves or not _passes(g, Mode.BIG):
                    result.skipped += 1
                    continue
                for tree in enumerate_tree_topologies(list(g.vertices)):
                    result.checked += 1
                    report = multiclustering_for(g, tree)
                    if not report.passed:
                        result.failures.append(f"{h.name} p={p} [{pi}]: conditions {report.failed_items}")
                        break
    return result


def random_graphs(seed: int, count: int) -> List[ElementaryGraph]:
    rng = np.random.default_rng(seed)
    graphs = []
    for k in range(count):
        h = random_elementary_graph(rng, externals=bool(k % 2))
        graphs.append(ElementaryGraph(h.graph, h.external, h.special, f"random-{k}"))
    return graphs


def verify_theorems(
    seed: int = 0,
    random_count: int = 100,
    suites: Sequence[str] = SUITES,
    powers: Sequence[int] = (2, 3),
) -> TheoremReport:
    """Run the selected suites on the built-in library plus seeded random graphs."""
    unknown = [name for name in suites if name not in SUITES]
    if unknown:
        raise ValidationError(f"unknown suite {unknown[0]!r}; expected one of {', '.join(SUITES)}")
    library = builtin_graph_library()
    curated = library.all_graphs()
    randoms = random_graphs(seed, random_count)
    rng = np.random.default_rng(seed)
    runners = {
        "library": lambda: library_pass(library),
        "contractions": lambda: contraction_theorem(curated, powers),
        "reduction": lambda: reduction_lemma(curated),
        "converse": lambda: converse_lemma(curated + randoms),
        "equivalence": lambda: equivalence_lemma(curated + randoms),
        "merging": lambda: merging_lemma(curated + [mergeable_example()]),
        "eta-total": lambda: eta_total(curated + randoms, rng),
        "multiclustering": lambda: multiclustering_suite(curated, powers),
    }
    results = []
    for name in suites:
        logger.info("running suite %s", name)
        results.append(runners[name]())
    return TheoremReport(results)
