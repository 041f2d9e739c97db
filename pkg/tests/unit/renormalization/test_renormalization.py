#!/usr/bin/env python3
"""
Unit Tests for the renormalization maps and counterterms

Following coding standards:
- Unit Tests Primary: Test individual functions in isolation
- Fail Fast: Tests must fail immediately on any deviation from expected behavior
- No Try-Catch: Exceptions are for unrecoverable errors only
"""

# Add the src directory to Python path
import math
import sys
from fractions import Fraction
from pathlib import Path

import pytest

src_path = Path(__file__).parent.parent.parent.parent / "src"
sys.path.insert(0, str(src_path))

from wzbench.exceptions import DomainError, ValidationError
from wzbench.renormalization import (
    N_MAPS,
    RenormalizationConstants,
    SymbolSpan,
    apply_L,
    counterterm_coefficients,
    counterterm_consistency,
    monotonicity_failures,
    nilpotency_failures,
    renorm_map,
    structure_identity_failures,
)
from wzbench.symbols import CATALOGUE, ONE, X1, parse_symbol


class TestApplyL:
    """Unit tests for apply_L."""

    def test_table_entries(self):
        """Spot-check images of L^(i)."""
        assert apply_L(1, CATALOGUE["Xi2"]) == SymbolSpan.of(ONE)
        assert apply_L(1, CATALOGUE["Xi3b"]) == SymbolSpan.of(CATALOGUE["IXi"], 2)
        assert apply_L(3, CATALOGUE["Xi4b"]) == SymbolSpan.of(CATALOGUE["IXi"], 3)
        assert apply_L(1, CATALOGUE["Xi2X"]) == SymbolSpan.of(X1)

    def test_l2_counts_both_xi3_copies_in_xi4c(self):
        """L^(2) replaces each of the two root copies of Xi3 in Xi4c."""
        assert apply_L(2, CATALOGUE["Xi4c"]) == SymbolSpan.of(CATALOGUE["IXi"], 2)
        assert 2 not in counterterm_coefficients()["Xi4c"]

    def test_zero_outside_table(self):
        """Every other base symbol maps to zero."""
        assert apply_L(4, CATALOGUE["Xi2"]).is_zero()
        assert apply_L(2, X1).is_zero()

    def test_linear_extension(self):
        """L is linear on spans."""
        span = SymbolSpan({CATALOGUE["Xi2"]: Fraction(2), CATALOGUE["Xi3"]: Fraction(1)})

        assert apply_L(1, span) == SymbolSpan({ONE: Fraction(2), CATALOGUE["IXi"]: Fraction(1)})

    def test_index_and_domain(self):
        """Bad indices are invalid input; symbols outside the sixteen are a domain error."""
        with pytest.raises(ValidationError):
            apply_L(0, CATALOGUE["Xi2"])
        with pytest.raises(ValidationError):
            apply_L(N_MAPS + 1, CATALOGUE["Xi2"])
        with pytest.raises(DomainError):
            apply_L(1, parse_symbol("X0 Xi"))


class TestAlgebraicChecks:
    """Unit tests for the structural identities."""

    def test_nilpotency(self):
        """L^(i) L^(j) = 0 on the base symbols."""
        assert nilpotency_failures() == []

    def test_monotonicity(self):
        """Every σ in L^(i)τ has |σ| > |τ|."""
        assert monotonicity_failures() == []

    def test_structure_identity(self):
        """Δ L^(j) = (L^(j) ⊗ Id) Δ for j = 2..7."""
        assert structure_identity_failures() == []


class TestRenormalizationMap:
    """Unit tests for M = Id − Σ ℓ_i L^(i)."""

    def test_identity_when_all_zero(self):
        """ℓ = 0 gives the identity."""
        m = renorm_map([0] * N_MAPS)

        assert m(CATALOGUE["Xi4"]) == SymbolSpan.of(CATALOGUE["Xi4"])

    def test_counterterm_of_xi2(self):
        """The One-coefficient of M(Ξ I(Ξ)) is −ℓ_1."""
        m = renorm_map([3, 0, 0, 0, 0, 0, 0])

        assert m.counterterm(CATALOGUE["Xi2"]) == -3
        assert m.counterterm(CATALOGUE["Xi"]) == 0

    def test_wrong_length(self):
        """Exactly seven parameters."""
        with pytest.raises(ValidationError):
            renorm_map([1, 2])

    def test_counterterm_coefficients(self):
        """Each ℓ_i produces One from exactly one base symbol."""
        forms = counterterm_coefficients()

        assert forms["Xi2"] == {1: Fraction(-1)}
        assert forms["Xi4c"] == {7: Fraction(-1)}
        assert len(forms) == N_MAPS


class TestRenormalizationConstants:
    """Unit tests for RenormalizationConstants."""

    def test_assembly_from_diagrams(self):
        """Xi4 and Xi4e pieces are summed."""
        values = {
            "Xi2": 1.0, "Xi3": 2.0, "Xi3b": 3.0, "Xi4b": 4.0, "Xi4c": 5.0,
            "Xi4_1": 0.5, "Xi4_2": 0.25, "Xi4_3": 0.25,
            "Xi4e_1": 1.0, "Xi4e_2": 1.0, "Xi4e_3": 1.0,
        }
        constants = RenormalizationConstants.from_diagrams(values)

        assert constants.C1 == 1.0
        assert constants.c2 == pytest.approx(1.0)
        assert constants.c4 == pytest.approx(3.0)

    def test_ell_scaling(self):
        """ℓ_1 ∝ ε⁻¹ and ℓ_2, ℓ_3 ∝ ε^(−1/2)."""
        constants = RenormalizationConstants(C1=1.0, C2=2.0, C3=4.0, c1=6.0)
        ell = constants.ell(0.25)

        assert ell[0] == pytest.approx(4.0)
        assert ell[1] == pytest.approx(4.0)
        assert ell[2] == pytest.approx(8.0)
        assert ell[5] == 6.0
        assert math.isclose(sum(constants.as_dict().values()), 13.0)


class TestCountertermConsistency:
    """Unit tests for the drift counterterm comparison."""

    def test_only_c3_multiplier_differs(self):
        """All rows share their monomial; only the C3 multiplier disagrees."""
        rows = counterterm_consistency()
        disagreeing = [row for row in rows if not row.agrees]

        assert len(rows) == N_MAPS
        assert all(row.same_monomial for row in rows)
        assert [(row.constant, row.table_multiplier) for row in disagreeing] == [("C3", Fraction(1, 2))]


if __name__ == "__main__":
    import pytest

    pytest.main([__file__])
