#!/usr/bin/env python3
"""
Unit Tests for labeled hypergraphs, the power-counting checker and Wick contractions

Following coding standards:
- Unit Tests Primary: Test individual functions in isolation
- Fail Fast: Tests must fail immediately on any deviation from expected behavior
- No Try-Catch: Exceptions are for unrecoverable errors only
"""

# Add the src directory to Python path
import json
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

src_path = Path(__file__).parent.parent.parent.parent / "src"
sys.path.insert(0, str(src_path))

from wzbench.exceptions import DomainError, GraphValidationError, ParseError, ValidationError
from wzbench.graphs import (
    ContractionPartition,
    EdgeKind,
    EdgeLabel,
    ElementaryGraph,
    GraphLibrary,
    Mode,
    builtin_graph_library,
    check_assumption,
    edge2,
    enumerate_wick_partitions,
    merge_hyperedges,
    mergeable_example,
    mergeable_pairs,
    normalize_bad_chains,
    parse_graph,
    random_elementary_graph,
    wick_contract,
)
from wzbench.graphs.hypergraph import LabeledHypergraph
from wzbench.graphs.io import dump_graph

LIBRARY = builtin_graph_library()


def single_edge(a, r=0):
    return {"vertices": ["0", "v"], "vstar": ["0", "v"], "edges2": [{"from": "v", "to": "0", "a": a, "r": r}]}


def pairing(h):
    return ContractionPartition(tuple(((1, x), (2, x)) for x in sorted(h.external)))


class TestParsing:
    """Unit tests for the JSON graph format."""

    def test_parse_big_graph(self):
        """Documents without 'special' are plain hypergraphs."""
        graph = parse_graph(json.dumps(single_edge(2)))

        assert isinstance(graph, LabeledHypergraph)
        assert graph.s == 3
        assert graph.edges2[0].label.a.c == 2

    def test_dump_and_parse_library_graph(self):
        """A library graph survives a trip through JSON."""
        h = LIBRARY.find("Xi3:1")
        again = parse_graph(dump_graph(h))

        assert isinstance(again, ElementaryGraph)
        assert again.external == h.external
        assert set(again.graph.edges2) == set(h.graph.edges2)
        assert again.graph.edges_h == h.graph.edges_h

    def test_malformed_json(self):
        """Broken JSON is a ParseError naming the line."""
        with pytest.raises(ParseError, match="line 1"):
            parse_graph('{"vertices": [')

    def test_schema_errors(self):
        """Missing fields and duplicate vertices are parse errors."""
        with pytest.raises(ParseError):
            parse_graph({"vstar": ["0"]})
        with pytest.raises(ParseError):
            parse_graph({"vertices": ["0", "0"]})
        with pytest.raises(ParseError):
            parse_graph({**single_edge(1), "edges2": [{"from": "v", "to": "0", "a": [1, 0]}]})

    def test_unknown_library_graph(self):
        """Unknown names are invalid input."""
        with pytest.raises(ValidationError):
            LIBRARY.find("Xi9:1")


class TestLibrary:
    """Unit tests for the curated graph library."""

    def test_every_negative_symbol_with_new_terms_is_present(self):
        """Xi4, Xi4e, Xi4b and Xi4c carry all their new moment terms."""
        sizes = {name: len(graphs) for name, graphs in LIBRARY.items()}

        assert sizes == {"Xi": 1, "Xi2": 2, "Xi3": 2, "Xi3b": 2, "Xi4": 8, "Xi4e": 7, "Xi4b": 6, "Xi4c": 9}
        assert LIBRARY.coefficients["Xi4b"] == (1, -6, 3, -3, 3, -1)
        assert all(len(LIBRARY.coefficients[name]) == n for name, n in sizes.items())

    def test_subdiagram_kernels(self):
        """The renormalized Xi3 and Xi3b subdiagrams appear as single (7/2, −1) kernels."""
        found = {
            h.name: e.name
            for h in LIBRARY.all_graphs()
            for e in h.graph.edges2
            if e.label.a.c == Fraction(7, 2)
        }

        assert found == {"Xi4:5": "Q_Xi3", "Xi4e:7": "Q_Xi3b", "Xi4c:1": "Q_Xi3mid"}
        assert all(LIBRARY.find(name).graph.edges2[-2].label.r == -1 for name in ("Xi4:5", "Xi4e:7", "Xi4c:1"))

    def test_noisy_xi4b_branch_stays_barred(self):
        """The branch carrying the free noise keeps its (1, 1) kernel into r2."""
        for name in ("Xi4b:2", "Xi4b:3"):
            (branch,) = [e for e in LIBRARY.find(name).graph.edges2 if (e.tail, e.head) == ("right", "r2")]
            assert branch.label == EdgeLabel.of(1, 1)

    def test_coefficients_must_match_graphs(self):
        """One coefficient per graph."""
        with pytest.raises(ValidationError):
            GraphLibrary(graphs={"Xi": LIBRARY["Xi"]}, coefficients={"Xi": (1, 1)})


class TestStructuralValidation:
    """Unit tests for graph validation."""

    def test_missing_root(self):
        """The root vertex must exist and be distinguished."""
        graph = LabeledHypergraph(("v", "w"), frozenset({"v"}), (edge2("v", "w", 1),))

        with pytest.raises(GraphValidationError, match="root"):
            graph.validate()

    def test_loop_rejected(self):
        """2-edges cannot be loops."""
        graph = LabeledHypergraph(("0", "v"), frozenset({"0"}), (edge2("v", "v", 1),))

        with pytest.raises(GraphValidationError, match="loop"):
            graph.validate()

    def test_check_validates_first(self):
        """The checker refuses structurally invalid graphs."""
        graph = LabeledHypergraph(("0", "v"), frozenset({"0"}), (edge2("v", "x", 1),))

        with pytest.raises(GraphValidationError):
            check_assumption(graph)

    def test_elementary_mode_needs_elementary_graph(self):
        """Test check_assumption mode validation."""
        with pytest.raises(ValidationError):
            check_assumption(parse_graph(single_edge(1)), Mode.ELEMENTARY)


class TestChecker:
    """Unit tests for check_assumption."""

    def test_single_edge_passes(self):
        """a = 2 on one edge satisfies every item."""
        report = check_assumption(parse_graph(single_edge(2)))

        assert report.passed
        assert report.total_violations == 0

    def test_single_edge_too_singular(self):
        """a = |s| breaks item 1 and the root subset of item 3."""
        report = check_assumption(parse_graph(single_edge(3)))

        assert not report.passed
        assert report.failed_items == [1, 3]

    def test_negative_renormalization_relaxes_item_1(self):
        """a − r⁻ is what item 1 bounds."""
        report = check_assumption(parse_graph(single_edge(3, -1)), items=(1,))

        assert report.passed

    def test_kappa_breaks_ties(self):
        """A κ-shift below the threshold passes item 1."""
        report = check_assumption(parse_graph(single_edge([3, 1, -1, 1])), items=(1,))

        assert report.passed

    def test_library_passes_elementary_check(self):
        """Every curated graph satisfies the elementary assumption."""
        for h in LIBRARY.all_graphs():
            assert check_assumption(h, Mode.ELEMENTARY).passed, h.name

    def test_subdiagram_kernel_needs_the_noise_kappa(self):
        """Without its 3κ the Xi3 subdiagram kernel only ties item 4."""
        h = LIBRARY.find("Xi4:5")
        exact = tuple(
            replace(e, label=EdgeLabel.of(Fraction(7, 2), -1)) if e.kind is EdgeKind.RENORMALIZED else e
            for e in h.graph.edges2
        )
        report = check_assumption(replace(h, graph=replace(h.graph, edges2=exact)), Mode.ELEMENTARY)

        assert check_assumption(h, Mode.ELEMENTARY).passed
        assert report.failed_items == [4]
        (violation,) = report.violations
        assert tuple(sorted(violation.subset)) == ("l2", "l3", "x")
        assert violation.lhs == violation.rhs

    def test_xi_fails_big_check_on_its_noise_vertex(self):
        """The big check is too strict for external vertices."""
        report = check_assumption(LIBRARY.find("Xi"), Mode.BIG)

        assert report.failed_items == [4]
        assert [v.subset for v in report.violations] == [("x",)]

    def test_violation_limit(self):
        """Reports keep at most violation_limit entries but count them all."""
        report = check_assumption(parse_graph(single_edge(3)), violation_limit=1)

        assert len(report.violations) == 1
        assert report.total_violations == 2

    def test_disconnected_subsets_are_checked(self):
        """Two separate (19/4, −2) pairs break item 2 only as a union."""
        graph = LabeledHypergraph(
            ("0", "a", "b", "c", "d"),
            frozenset({"0"}),
            (edge2("b", "a", Fraction(19, 4), -2), edge2("d", "c", Fraction(19, 4), -2)),
        )
        report = check_assumption(graph, items=(1, 2))

        assert report.failed_items == [2]
        assert [tuple(sorted(v.subset)) for v in report.violations] == [("a", "b", "c", "d")]

    def test_jobs_do_not_change_the_verdict(self):
        """Threaded enumeration returns the same report."""
        h = LIBRARY.find("Xi3:2")

        assert check_assumption(h, Mode.ELEMENTARY, jobs=4).to_dict() == check_assumption(h, Mode.ELEMENTARY).to_dict()


class TestContractions:
    """Unit tests for Wick contractions."""

    def test_partition_counts(self):
        """Blocks must span two copies."""
        assert len(list(enumerate_wick_partitions(["x"], 2))) == 1
        assert len(list(enumerate_wick_partitions(["x"], 3))) == 1
        assert len(list(enumerate_wick_partitions(["x1", "x2"], 2))) == 3
        with pytest.raises(ValidationError):
            list(enumerate_wick_partitions(["x"], 1))

    def test_invalid_partition(self):
        """A partition that misses a site is a domain error."""
        h = LIBRARY.find("Xi2:1")

        with pytest.raises(DomainError):
            wick_contract(h, 2, ContractionPartition((((1, "x1"), (2, "x1")),)))

    def test_reduced_pairing_of_xi(self):
        """Reducing the pairing leaves v#1 → v#2 with label (|s|, −1)."""
        result = wick_contract(LIBRARY.find("Xi"), 2, pairing(LIBRARY.find("Xi")), reduce=True)

        assert set(result.graph.vertices) == {"0", "v#1", "v#2"}
        assert result.retraction["x#1"] == "v#1"
        assert check_assumption(result.graph, Mode.BIG).passed

    def test_unreduced_pairing_fails_only_on_bad_chains(self):
        """Item 2 fails exactly on bad chains of the unreduced contraction."""
        h = LIBRARY.find("Xi")
        result = wick_contract(h, 2, pairing(h), reduce=False)
        report = check_assumption(result.graph, Mode.BIG)

        assert report.failed_items == [2]
        assert all(result.is_bad_chain(v.subset) for v in report.violations)
        assert report.total_violations == 3
        assert check_assumption(result.graph, Mode.BIG, excluded_subsets=result.bad_chains()).passed

    def test_normalizing_bad_chains(self):
        """Integrating out the contracted noise vertices gives the reduced graph's verdict."""
        h = LIBRARY.find("Xi")
        full = wick_contract(h, 2, pairing(h), reduce=False).graph

        assert check_assumption(full, Mode.BIG, normalize_bad_chains=True).passed
        assert set(normalize_bad_chains(full).vertices) == {"0", "v#1", "v#2"}

    def test_three_copies_make_a_hyperedge(self):
        """A block of three sites becomes a cumulant hyperedge."""
        h = LIBRARY.find("Xi")
        (pi,) = enumerate_wick_partitions(h.external, 3)
        result = wick_contract(h, 3, pi)

        assert len(result.graph.edges_h) == 1
        assert result.graph.edges_h[0].label.a.c == 9 / 2


class TestMerging:
    """Unit tests for hyperedge merging."""

    def test_merge_example(self):
        """Two (|s|, −1) pair edges merge into one 4-vertex cumulant that still passes."""
        h = mergeable_example()
        (pair,) = mergeable_pairs(h)
        merged = merge_hyperedges(h, *pair)

        assert len(merged.graph.edges_h) == 1
        assert len(merged.graph.edges_h[0].members) == 4
        assert check_assumption(h, Mode.ELEMENTARY).passed
        assert check_assumption(merged, Mode.ELEMENTARY).passed

    def test_non_mergeable_edges(self):
        """The test edge cannot be merged."""
        with pytest.raises(DomainError):
            merge_hyperedges(mergeable_example(), 0, 5)
        with pytest.raises(DomainError):
            merge_hyperedges(mergeable_example(), 5, 5)


class TestRandomGraphs:
    """Unit tests for random_elementary_graph."""

    def test_random_graphs_are_valid(self):
        """Every generated graph is a valid elementary graph."""
        rng = np.random.default_rng(11)
        for k in range(40):
            h = random_elementary_graph(rng, externals=bool(k % 2))
            assert h.structural_errors() == []
            if k % 2 == 0:
                assert not h.external

    def test_seeded(self):
        """Same seed, same graph."""
        first = random_elementary_graph(np.random.default_rng(3))
        second = random_elementary_graph(np.random.default_rng(3))

        assert first == second


if __name__ == "__main__":
    import pytest

    pytest.main([__file__])
