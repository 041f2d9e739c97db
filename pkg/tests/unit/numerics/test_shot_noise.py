#!/usr/bin/env python3
"""
Unit Tests for the space-time shot-noise model

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

import numpy as np
import pytest

src_path = Path(__file__).parent.parent.parent.parent / "src"
sys.path.insert(0, str(src_path))

from wzbench.cumulants import check_exponential_decay
from wzbench.exceptions import ValidationError
from wzbench.numerics.shot_noise import (
    ORACLE_CONFIGURATIONS,
    MarkLaw,
    Profile,
    ShotNoiseModel,
    empirical_joint_cumulant,
    sampling_oracle,
)


class TestProfilesAndMarks:
    """Test pulse profiles and mark laws"""

    @pytest.mark.parametrize("profile", list(Profile))
    def test_single_overlap_is_mass(self, profile):
        """Test ∫ψ equals the closed-form mass"""
        overlap = profile.overlap(np.array([[0.3]]), 0.7)
        assert overlap[0] == pytest.approx(profile.mass(0.7))

    def test_gaussian_pair_overlap(self):
        """Test ∫ψ(−s)ψ(p − s) ds = √(πw²) e^{−p²/4w²}"""
        overlap = Profile.GAUSSIAN.overlap(np.array([[0.0, 1.0]]), 0.5)
        assert overlap[0] == pytest.approx(math.sqrt(math.pi * 0.25) * math.exp(-1.0))

    def test_exponential_pair_overlap(self):
        """Test ∫e^{−|s|−|p−s|} ds = (1 + p) e^{−p} at unit width"""
        overlap = Profile.EXPONENTIAL.overlap(np.array([[0.0, 2.0]]), 1.0)
        assert overlap[0] == pytest.approx(3.0 * math.exp(-2.0))

    def test_mark_moments(self):
        """Test the exact mark moments"""
        assert MarkLaw.CONSTANT.moment(5) == 1
        assert MarkLaw.SYMMETRIC.moment(3) == 0
        assert MarkLaw.SYMMETRIC.moment(4) == 1
        assert MarkLaw.UNIFORM.moment(2) == Fraction(1, 3)


class TestShotNoiseModel:
    """Test cumulants of the shot-noise field"""

    def test_invalid_parameters(self):
        """Test intensity and widths must be positive"""
        with pytest.raises(ValidationError):
            ShotNoiseModel(intensity=0.0)
        with pytest.raises(ValidationError):
            ShotNoiseModel(width_x=-1.0)
        with pytest.raises(ValueError):
            ShotNoiseModel(profile="cauchy")

    def test_string_enums_are_coerced(self):
        """Test profile and mark names are accepted as strings"""
        model = ShotNoiseModel(profile="exponential", marks="symmetric")
        assert model.profile is Profile.EXPONENTIAL
        assert model.marks is MarkLaw.SYMMETRIC

    @pytest.mark.parametrize("profile", ["gaussian", "exponential"])
    def test_normalized_mass(self, profile):
        """Test the normalized model has ∫𝔠₂ = 1"""
        model = ShotNoiseModel(intensity=2.0, width_t=0.3, width_x=0.8, profile=profile).normalized()
        assert model.second_cumulant_mass() == pytest.approx(1.0)

    def test_first_cumulant_vanishes(self):
        """Test the field is centered"""
        z = np.zeros((4, 1, 2))
        assert np.all(ShotNoiseModel().cumulant(z) == 0.0)

    def test_symmetric_marks_kill_odd_cumulants(self):
        """Test 𝔠₃ = 0 when the marks are symmetric"""
        z = np.array([[[0.0, 0.0], [0.1, 0.2], [0.3, -0.1]]])
        assert ShotNoiseModel(marks="symmetric").cumulant(z)[0] == 0.0

    def test_bad_shapes_and_methods(self):
        """Test points must have shape (..., n, 2) and the method must be known"""
        model = ShotNoiseModel()
        with pytest.raises(ValidationError):
            model.cumulant(np.zeros((3, 3)))
        with pytest.raises(ValidationError):
            model.cumulant(np.zeros((1, 2, 2)), method="spline")

    @pytest.mark.parametrize("profile", ["gaussian", "exponential"])
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_closed_form_matches_quadrature(self, profile, n):
        """Test the closed-form overlaps against numerical integration"""
        model = ShotNoiseModel(width_t=0.4, width_x=0.6, profile=profile)
        z = np.random.default_rng(n).normal(scale=0.5, size=(3, n, 2))
        closed = model.cumulant(z)
        quad = model.cumulant(z, method="quadrature")
        np.testing.assert_allclose(closed, quad, rtol=1e-7)

    def test_rescaled_cumulant_at_unit_scale(self):
        """Test 𝔠^{(1)} = 𝔠"""
        model = ShotNoiseModel()
        z = np.array([[[0.1, 0.2], [0.0, 0.0]]])
        np.testing.assert_allclose(model.rescaled_cumulant(1.0, z), model.cumulant(z))

    def test_rescaled_pair_cumulant_scaling(self):
        """Test 𝔠₂^{(ε)}(w, 0) = ε^{−3} 𝔠₂((w_t/ε², w_x/ε), 0)"""
        model = ShotNoiseModel()
        w = np.array([0.01, 0.05])
        expected = 0.1**-3 * model.pair_cumulant(np.array([1.0, 0.5]))
        assert model.pair_cumulant(w, eps=0.1) == pytest.approx(expected)

    def test_invalid_epsilon(self):
        """Test ε must lie in (0, 1]"""
        with pytest.raises(ValidationError):
            ShotNoiseModel().rescaled_cumulant(0.0, np.zeros((1, 2, 2)))

    @pytest.mark.parametrize("profile", ["gaussian", "exponential"])
    def test_cumulants_decay_exponentially(self, profile):
        """Test |𝔠_n| ≤ C θ^{diam} with the model's own decay rate"""
        model = ShotNoiseModel(width_t=0.5, width_x=0.5, profile=profile)
        z = np.random.default_rng(4).uniform(-3.0, 3.0, size=(200, 3, 2))
        constant = 9.0 * float(model.cumulant(np.zeros((1, 3, 2)))[0])
        report = check_exponential_decay(model.cumulant, z, model.decay_rate(), constant)
        assert report.passed


class TestEmpiricalCumulants:
    """Test the sampling side of the oracle"""

    def test_joint_cumulant_of_signs(self):
        """Test the variance of an alternating ±1 column is exactly 1"""
        column = np.tile([1.0, -1.0], 500)
        value, stderr = empirical_joint_cumulant(np.stack([column, column], axis=1))
        assert value == 1.0
        assert stderr == 0.0

    def test_sampled_field_is_centered(self):
        """Test simulated fields have mean close to zero"""
        model = ShotNoiseModel().normalized()
        field = model.sample_field(np.random.default_rng(0), np.array([[0.0, 0.0], [0.5, 0.5]]), 20_000)
        assert field.shape == (20_000, 2)
        assert abs(field.mean()) < 0.05

    @pytest.mark.slow
    def test_sampling_oracle_agrees(self):
        """Test closed-form cumulants against simulated joint cumulants"""
        rows = sampling_oracle(ShotNoiseModel().normalized(), np.random.default_rng(1), samples=50_000, sigmas=5.0)
        assert len(rows) == 2 * len(ORACLE_CONFIGURATIONS)
        assert all(row.agrees for row in rows)


if __name__ == "__main__":
    import pytest

    pytest.main([__file__])
