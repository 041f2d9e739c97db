#!/usr/bin/env python3
"""
Unit Tests for the brute-force verification suites

Following coding standards:
- Unit Tests Primary: Test individual functions in isolation
- Fail Fast: Tests must fail immediately on any deviation from expected behavior
- No Try-Catch: Exceptions are for unrecoverable errors only
"""

# Add the src directory to Python path
import sys
from pathlib import Path

import numpy as np
import pytest

src_path = Path(__file__).parent.parent.parent.parent / "src"
sys.path.insert(0, str(src_path))

from wzbench.exceptions import ValidationError
from wzbench.graphs import builtin_graph_library
from wzbench.graphs.library import mergeable_example
from wzbench.theorems import (
    SUITES,
    SuiteResult,
    TheoremReport,
    contraction_theorem,
    converse_lemma,
    equivalence_lemma,
    eta_total,
    library_pass,
    merging_lemma,
    multiclustering_suite,
    random_graphs,
    reduction_lemma,
    symmetric_pairing,
    verify_theorems,
)

LIBRARY = builtin_graph_library()
CURATED = LIBRARY.all_graphs()


class TestSuiteResult:
    """Test suite bookkeeping"""

    def test_pass_and_fail(self):
        """Test a suite passes exactly when it has no failures"""
        ok = SuiteResult("library", checked=3)
        bad = SuiteResult("merging", checked=1, failures=["g: broken"])
        report = TheoremReport([ok, bad])
        assert ok.passed and not bad.passed
        assert not report.passed
        assert report.to_dict()["suites"][1] == {
            "suite": "merging",
            "pass": False,
            "checked": 1,
            "skipped": 0,
            "failures": ["g: broken"],
        }
        assert "FAIL" in report.to_table()
        assert "g: broken" in report.to_table()

    def test_symmetric_pairing(self):
        """Test every external vertex is paired with its second copy"""
        pi = symmetric_pairing(LIBRARY.find("Xi2:1"))
        assert pi.blocks == (((1, "x1"), (2, "x1")), ((1, "x2"), (2, "x2")))


class TestSuitesOnLibrary:
    """Test the suites on the curated graphs"""

    def test_library(self):
        """Test all thirty-seven curated graphs pass the elementary check"""
        result = library_pass(LIBRARY)
        assert result.passed
        assert result.checked == 37

    def test_contractions_of_pairs(self):
        """Test reduced two-fold contractions pass the big check"""
        result = contraction_theorem(CURATED, powers=(2,))
        assert result.passed
        assert result.skipped == 0
        assert result.checked > 0

    def test_reduction(self):
        """Test the reduction claim on two-fold contractions"""
        result = reduction_lemma(CURATED)
        assert result.passed

    def test_converse(self):
        """Test graphs with passing symmetric pairings pass the elementary check"""
        result = converse_lemma(CURATED)
        assert result.passed
        assert result.checked + result.skipped == len(CURATED)
        assert result.checked >= 1

    def test_equivalence(self):
        """Test both checkers agree on graphs without external vertices"""
        result = equivalence_lemma(CURATED)
        assert result.passed
        assert result.checked == 10
        assert result.skipped == 27

    def test_merging(self):
        """Test merging keeps the mergeable example passing"""
        result = merging_lemma([mergeable_example()])
        assert result.passed
        assert result.checked == 1

    def test_eta_total(self):
        """Test the η̃ total identity on random trees"""
        result = eta_total(CURATED, np.random.default_rng(0), trees_per_graph=3)
        assert result.passed
        assert result.checked == 3 * len(CURATED)

    @pytest.mark.slow
    def test_contractions_of_triples(self):
        """Test reduced three-fold contractions pass the big check"""
        assert contraction_theorem(CURATED, powers=(3,)).passed

    @pytest.mark.slow
    def test_multiclustering(self):
        """Test passing reduced pairings satisfy both multiclustering conditions"""
        result = multiclustering_suite(CURATED, powers=(2,))
        assert result.passed
        assert result.checked > 0


class TestSuitesOnRandomGraphs:
    """Test the suites on seeded random graphs"""

    def test_random_graphs_are_named_and_seeded(self):
        """Test random graphs are reproducible and alternate external vertices"""
        first = random_graphs(3, 4)
        second = random_graphs(3, 4)
        assert [h.name for h in first] == ["random-0", "random-1", "random-2", "random-3"]
        assert [h.graph for h in first] == [h.graph for h in second]
        assert not first[0].external

    @pytest.mark.slow
    def test_converse_and_equivalence(self):
        """Test both lemmas on a hundred random graphs"""
        graphs = random_graphs(0, 100)
        assert converse_lemma(graphs).passed
        assert equivalence_lemma(graphs).passed


class TestVerifyTheorems:
    """Test the suite runner"""

    def test_selected_suite(self):
        """Test a single selected suite runs alone"""
        report = verify_theorems(seed=0, random_count=0, suites=["library"])
        assert report.passed
        assert [s.name for s in report.suites] == ["library"]

    def test_unknown_suite(self):
        """Test unknown suite names are rejected before anything runs"""
        with pytest.raises(ValidationError):
            verify_theorems(suites=["library", "bogus"])

    def test_suite_names(self):
        """Test the runner knows every suite"""
        assert set(SUITES) == {
            "library",
            "contractions",
            "reduction",
            "converse",
            "equivalence",
            "merging",
            "eta-total",
            "multiclustering",
        }


if __name__ == "__main__":
    import pytest

    pytest.main([__file__])
