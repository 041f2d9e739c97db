#!/usr/bin/env python3
"""
Unit Tests for the shot-noise equation solvers

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

from wzbench.exceptions import DomainError, ValidationError
from wzbench.numerics.shot_noise import ShotNoiseModel
from wzbench.renormalization import RenormalizationConstants
from wzbench.wzsim import (
    EquationSpec,
    GridSpec,
    coefficient,
    compare_experiment,
    deterministic_order,
    ito_variance,
    sample_noise_field,
    shot_noise_variance,
    solve_ito,
    solve_renormalized,
)

CONSTANTS = RenormalizationConstants(C1=0.3, C2=-0.2, C3=0.1, c1=0.05, c2=0.4, c3=-0.1, c4=0.2)


class TestGridSpec:
    """Test grid construction and scheme checks"""

    def test_invalid_grids(self):
        """Test too few points and dt > horizon are rejected"""
        with pytest.raises(ValidationError):
            GridSpec(n_space=4)
        with pytest.raises(ValidationError):
            GridSpec(dt=0.1, horizon=0.01)

    def test_derived_quantities(self):
        """Test dx, step count and the Laplacian symbol"""
        grid = GridSpec(64, 2e-4, 0.05)
        assert grid.dx == 1.0 / 64
        assert grid.steps == 250
        symbol = grid.laplacian_symbol()
        assert symbol[0] == 0.0
        assert symbol[1] == pytest.approx(symbol[-1])
        assert symbol.max() == pytest.approx(4.0 * 64**2)

    def test_explicit_scheme_stability(self):
        """Test the explicit scheme refuses dt above dx²/2"""
        grid = GridSpec(64, 2e-4, 0.05)
        grid.check("semi-implicit")
        with pytest.raises(DomainError):
            grid.check("explicit")
        GridSpec(16, 1e-3, 0.01).check("explicit")

    def test_unknown_scheme(self):
        """Test unknown schemes are rejected"""
        with pytest.raises(ValidationError):
            GridSpec().check("crank-nicolson")


class TestEquationSpec:
    """Test coefficient presets and counterterms"""

    def test_unknown_presets(self):
        """Test unknown coefficient and initial presets are rejected"""
        with pytest.raises(ValidationError):
            coefficient("tanh")
        with pytest.raises(ValidationError):
            EquationSpec.from_presets(initial="square")

    def test_counterterm_vanishes_for_constant_g(self):
        """Test every counterterm carries a derivative of G"""
        eq = EquationSpec.from_presets(G="one", constants=CONSTANTS)
        assert np.all(eq.counterterm(np.linspace(-1, 1, 9), 0.1) == 0.0)

    def test_linear_g_counterterm(self):
        """Test G(u) = u keeps only the terms without G'' or G'''"""
        eq = EquationSpec.from_presets(G="linear", constants=CONSTANTS)
        u = np.array([0.5, -2.0])
        expected = (CONSTANTS.C1 / 0.1 + CONSTANTS.C2 / 0.1**0.5 + CONSTANTS.c2) * u
        np.testing.assert_allclose(eq.counterterm(u, 0.1), expected)


class TestSolvers:
    """Test the finite-difference solvers"""

    def test_zero_noise_coefficient_is_heat_flow(self):
        """Test G ≡ 0 decays the sin mode by the exact semi-implicit factor"""
        grid = GridSpec(32, 1e-3, 0.02)
        eq = EquationSpec.from_presets("zero", "zero", "sin")
        traj = solve_renormalized(eq, np.zeros((grid.steps, 32)), grid, 1.0, save_every=grid.steps)
        factor = (1.0 / (1.0 + grid.dt * grid.laplacian_symbol()[1])) ** grid.steps
        np.testing.assert_allclose(traj.final, factor * np.sin(2 * np.pi * grid.x), atol=1e-12)
        assert not traj.diverged
        assert traj.times[-1] == pytest.approx(0.02)

    def test_noise_shape_checked(self):
        """Test the noise array must match the grid"""
        grid = GridSpec(16, 1e-3, 0.01)
        with pytest.raises(ValidationError):
            solve_renormalized(EquationSpec(), np.zeros((3, 16)), grid, 0.5)

    def test_noise_resolution_checked(self):
        """Test ε·N < 1 is refused"""
        with pytest.raises(DomainError):
            sample_noise_field(ShotNoiseModel(), 0.01, GridSpec(64, 1e-3, 0.01), seed=0)

    def test_noise_field_is_deterministic(self):
        """Test the same seed gives the same noise field"""
        grid = GridSpec(16, 1e-3, 0.01)
        model = ShotNoiseModel().normalized()
        first = sample_noise_field(model, 0.25, grid, seed=5)
        second = sample_noise_field(model, 0.25, grid, seed=5)
        assert first.shape == (grid.steps, 16)
        np.testing.assert_array_equal(first, second)
        assert not np.array_equal(first, sample_noise_field(model, 0.25, grid, seed=6))

    def test_constant_g_needs_no_renormalization(self):
        """Test G ≡ 1 gives identical renormalized and counterterm-free trajectories"""
        grid = GridSpec(16, 1e-3, 0.01)
        noise = sample_noise_field(ShotNoiseModel().normalized(), 0.25, grid, seed=1)
        eq = EquationSpec.from_presets("zero", "one", "bump", CONSTANTS)
        kept = solve_renormalized(eq, noise, grid, 0.25)
        dropped = solve_renormalized(eq, noise, grid, 0.25, renormalize=False)
        np.testing.assert_array_equal(kept.values, dropped.values)

    def test_divergence_is_reported(self):
        """Test a tiny threshold flags divergence at the first step"""
        grid = GridSpec(16, 1e-3, 0.01)
        eq = EquationSpec.from_presets("zero", "zero", "sin")
        traj = solve_renormalized(eq, np.zeros((grid.steps, 16)), grid, 1.0, threshold=0.5)
        assert traj.diverged
        assert traj.divergence_step == 1
        assert traj.divergence_report()["diverged"] is True

    def test_ito_solver_is_deterministic(self):
        """Test the Itô reference depends only on its seed"""
        grid = GridSpec(16, 1e-3, 0.01)
        eq = EquationSpec.from_presets("zero", "one", "zero")
        first = solve_ito(eq, grid, seed=3)
        second = solve_ito(eq, grid, seed=3)
        np.testing.assert_array_equal(first.values, second.values)

    def test_ito_solver_is_explicit_by_default(self):
        """Test the Itô reference uses explicit stepping and enforces its stability bound"""
        coarse = GridSpec(16, 1e-2, 0.02)
        eq = EquationSpec.from_presets("zero", "one", "zero")
        with pytest.raises(DomainError):
            solve_ito(eq, coarse, seed=0)
        assert solve_ito(eq, coarse, seed=0, scheme="semi-implicit").values.shape == (3, 16)
        with pytest.raises(DomainError):
            ito_variance(coarse)

    def test_ito_variance_after_one_step(self):
        """Test one explicit step has variance dt·N and the semi-implicit step less"""
        grid = GridSpec(16, 1e-3, 0.01)
        assert ito_variance(grid, steps=1) == pytest.approx(1e-3 * 16)
        assert ito_variance(grid, steps=1, scheme="semi-implicit") < ito_variance(grid, steps=1)

    def test_deterministic_order_is_one(self):
        """Test the semi-implicit heat step is first order in dt"""
        order = deterministic_order(32, [4e-4, 2e-4, 1e-4, 5e-5], 0.02)
        assert order == pytest.approx(1.0, abs=0.05)

    @pytest.mark.slow
    def test_ito_variance(self):
        """Test the sampled Itô variance against the exact scheme variance"""
        grid = GridSpec(32, 1e-4, 0.01)
        eq = EquationSpec.from_presets("zero", "one", "zero")
        finals = np.array([solve_ito(eq, grid, seed=r, save_every=grid.steps).final for r in range(800)])
        assert float((finals**2).mean()) == pytest.approx(ito_variance(grid), rel=0.1)

    @pytest.mark.slow
    def test_shot_noise_variance(self):
        """Test the sampled variance under shot noise against the exact scheme variance"""
        grid = GridSpec(32, 1e-3, 0.05)
        model = ShotNoiseModel().normalized()
        eq = EquationSpec.from_presets("zero", "one", "zero")
        finals = np.array([
            solve_renormalized(eq, sample_noise_field(model, 0.25, grid, seed=r), grid, 0.25, save_every=grid.steps).final
            for r in range(800)
        ])
        assert float((finals**2).mean()) == pytest.approx(shot_noise_variance(model, 0.25, grid), rel=0.1)


class TestExperiment:
    """Test the renormalized versus counterterm-free contrast"""

    def test_small_experiment(self):
        """Test rows, variants and CSV output of a tiny run"""
        grid = GridSpec(16, 1e-3, 0.01)
        eq = EquationSpec.from_presets("zero", "one", "bump", CONSTANTS)
        report = compare_experiment(eq, ShotNoiseModel().normalized(), [0.5, 0.25], 3, grid, seed=0)
        assert len(report.rows) == 4
        assert {row.variant for row in report.rows} == {"renormalized", "unrenormalized"}
        assert report.medians("renormalized") == report.medians("unrenormalized")
        assert all(row.diverged == 0 and row.replicas == 3 for row in report.rows)
        assert report.to_csv().splitlines()[0] == "eps,variant,median_sup,q10_sup,q90_sup,diverged,replicas"
        assert report.to_dict()["constants"]["C1"] == 0.3

    def test_counterterm_damping_tracks_eps(self):
        """Test for G(u) = u the counterterm scales each step by (1 − dt/ε) on shared noise"""
        grid = GridSpec(64, 1e-4, 0.1)
        eq = EquationSpec.from_presets("zero", "linear", "bump", RenormalizationConstants(C1=1.0))
        model = ShotNoiseModel().normalized()
        ratios = {}
        for eps in (0.1, 0.025):
            noise = sample_noise_field(model, eps, grid, seed=5)
            kept = solve_renormalized(eq, noise, grid, eps, save_every=grid.steps)
            dropped = solve_renormalized(eq, noise, grid, eps, renormalize=False, save_every=grid.steps)
            ratios[eps] = float(np.abs(kept.final).max() / np.abs(dropped.final).max())
            assert ratios[eps] == pytest.approx((1.0 - grid.dt / eps) ** grid.steps, rel=0.1)
        assert ratios[0.1] / ratios[0.025] >= 10.0

    @pytest.mark.slow
    def test_nonconstant_g_contrast(self):
        """Test renormalized medians stay bounded and below the counterterm-free ones for G(u) = u"""
        grid = GridSpec(64, 1e-4, 0.1)
        eq = EquationSpec.from_presets("zero", "linear", "bump", RenormalizationConstants(C1=1.0))
        report = compare_experiment(eq, ShotNoiseModel().normalized(), [0.1, 0.05, 0.025], 5, grid, seed=0)
        kept = report.medians("renormalized")
        dropped = report.medians("unrenormalized")
        assert all(row.diverged == 0 for row in report.rows)
        for eps in (0.1, 0.05, 0.025):
            assert 1.0 <= kept[eps] <= 2.0
            assert kept[eps] <= 1.05 * dropped[eps]
        assert report.growth("renormalized") <= 2.0

    def test_increasing_eps_rejected(self):
        """Test the ε list must decrease"""
        with pytest.raises(ValidationError):
            compare_experiment(EquationSpec(), ShotNoiseModel(), [0.25, 0.5], 1, GridSpec(16, 1e-3, 0.01), seed=0)


if __name__ == "__main__":
    import pytest

    pytest.main([__file__])
