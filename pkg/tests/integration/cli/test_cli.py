#!/usr/bin/env python3
"""
Lean CLI Tests - wzbench

Integration tests that drive the real commands through Typer's runner.
Tests fail fast on any deviation from the documented exit codes.
"""

import json
import sys
from pathlib import Path

import pytest
from typer.testing import CliRunner

# Add the src directory to the Python path to import the CLI
sys.path.insert(0, str(Path(__file__).parent.parent.parent.parent / "src"))

try:
    from cli import app
except ImportError:
    # Fallback for direct execution
    from src.cli import app


def write_graph(tmp_path, a):
    path = tmp_path / f"edge_{a}.json"
    graph = {"vertices": ["0", "v"], "vstar": ["0", "v"], "edges2": [{"from": "v", "to": "0", "a": a, "r": 0}]}
    path.write_text(json.dumps(graph), encoding="utf-8")
    return path


class TestCLI:
    """Integration tests for the wzbench commands."""

    @pytest.fixture
    def runner(self):
        """Create a CLI runner for testing."""
        return CliRunner()

    def test_cli_help(self, runner):
        """Test CLI help output."""
        result = runner.invoke(app, ["--help"])
        assert result.exit_code == 0
        assert "Exit codes" in result.output

    def test_cli_invalid_command(self, runner):
        """Test CLI with invalid command fails fast."""
        result = runner.invoke(app, ["invalid-command"])
        assert result.exit_code == 2
        assert "No such command" in result.output

    def test_invalid_format(self, runner, tmp_path):
        """Test an unknown output format is a usage error."""
        result = runner.invoke(app, ["--format", "xml", "check-graph", str(write_graph(tmp_path, 2))])
        assert result.exit_code == 2
        assert "--format" in result.output

    def test_check_graph_pass(self, runner, tmp_path):
        """Test a graph satisfying every item exits 0."""
        result = runner.invoke(app, ["check-graph", str(write_graph(tmp_path, 2))])
        assert result.exit_code == 0

    def test_check_graph_fail(self, runner, tmp_path):
        """Test a too-singular edge exits 1 and reports its violations."""
        result = runner.invoke(app, ["--format", "json", "check-graph", str(write_graph(tmp_path, 3))])
        assert result.exit_code == 1
        payload = json.loads(result.stdout)
        assert payload["pass"] is False

    def test_check_graph_csv(self, runner, tmp_path):
        """Test CSV output lists one row per violation."""
        result = runner.invoke(app, ["--format", "csv", "check-graph", str(write_graph(tmp_path, 3))])
        assert result.exit_code == 1
        lines = result.stdout.strip().splitlines()
        assert lines[0] == "item,subset,lhs,required,rhs"
        assert len(lines) == 3

    def test_check_builtin_graph(self, runner):
        """Test library graphs pass the elementary check and fail the big one."""
        assert runner.invoke(app, ["check-graph", "--builtin", "Xi"]).exit_code == 0
        assert runner.invoke(app, ["check-graph", "--builtin", "Xi", "--mode", "big"]).exit_code == 1
        assert runner.invoke(app, ["check-graph", "--builtin", "Xi", "--mode", "tiny"]).exit_code == 2

    def test_check_graph_input_errors(self, runner, tmp_path):
        """Test missing, malformed and unknown graphs are usage errors."""
        bad = tmp_path / "bad.json"
        bad.write_text("{not json", encoding="utf-8")
        result = runner.invoke(app, ["check-graph", str(bad)])
        assert result.exit_code == 2
        assert "malformed JSON" in result.output
        assert runner.invoke(app, ["check-graph"]).exit_code == 2
        assert runner.invoke(app, ["check-graph", "--builtin", "Xi99"]).exit_code == 2

    def test_contract(self, runner, tmp_path):
        """Test the reduced pairing of Xi passes and is written to disk."""
        out = tmp_path / "contractions"
        result = runner.invoke(
            app, ["--format", "json", "contract", "--builtin", "Xi", "--output-dir", str(out)]
        )
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["pass"] is True
        assert len(payload["contractions"]) == 1
        assert (out / "contraction_0000.json").exists()

    def test_symbols_views(self, runner):
        """Test the symbol tables and the algebraic checks."""
        assert runner.invoke(app, ["symbols"]).exit_code == 0
        assert runner.invoke(app, ["symbols", "l-table"]).exit_code == 0
        assert runner.invoke(app, ["symbols", "generate", "--cutoff", "0"]).exit_code == 0
        result = runner.invoke(app, ["symbols", "checks"])
        assert result.exit_code == 0
        assert "counterterm C3" in result.output

    def test_symbols_errors(self, runner):
        """Test unknown views and bad cutoffs are usage errors."""
        assert runner.invoke(app, ["symbols", "trees"]).exit_code == 2
        assert runner.invoke(app, ["symbols", "generate", "--cutoff", "abc"]).exit_code == 2

    def test_verify_theorems(self, runner):
        """Test a single suite run and an unknown suite."""
        result = runner.invoke(app, ["verify-theorems", "--suite", "library", "--random-graphs", "0"])
        assert result.exit_code == 0
        assert "PASS" in result.output
        assert runner.invoke(app, ["verify-theorems", "--suite", "bogus"]).exit_code == 2

    def test_cumulants_exact_checks(self, runner):
        """Test the exact cumulant identities without the sampling oracle."""
        result = runner.invoke(
            app, ["cumulants", "--no-shot-noise", "--models", "1", "--order", "3", "--max-sites", "4"]
        )
        assert result.exit_code == 0

    def test_constants_quadrature(self, runner):
        """Test the Xi2 constant by quadrature."""
        result = runner.invoke(
            app, ["--format", "json", "constants", "--name", "Xi2", "--method", "quadrature"]
        )
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["estimates"][0]["name"] == "Xi2"
        assert payload["estimates"][0]["value"] > 0
        assert "constants" not in payload

    def test_constants_usage_errors(self, runner):
        """Test quadrature for other diagrams and unknown samplers are usage errors."""
        assert runner.invoke(app, ["constants", "--name", "Xi3", "--method", "quadrature"]).exit_code == 2
        assert runner.invoke(app, ["constants", "--name", "Xi2", "--sampler", "sobol"]).exit_code == 2

    def test_scaling_edgeless(self, runner):
        """Test the edgeless convolution has slope 0."""
        result = runner.invoke(app, ["--budget", "4096", "scaling", "--example", "edgeless"])
        assert result.exit_code == 0

    def test_simulate(self, runner, tmp_path):
        """Test a tiny simulation writes its rows as CSV."""
        config = tmp_path / "experiment.json"
        config.write_text(
            json.dumps(
                {
                    "grid": {"n_space": 16, "dt": 0.001, "horizon": 0.005},
                    "eps": [0.5, 0.25],
                    "replicas": 2,
                    "constants_budget": 256,
                }
            ),
            encoding="utf-8",
        )
        out = tmp_path / "rows.csv"
        result = runner.invoke(app, ["simulate", "--config", str(config), "--output-csv", str(out)])
        assert result.exit_code == 0
        lines = out.read_text(encoding="utf-8").strip().splitlines()
        assert lines[0].startswith("eps,variant")
        assert len(lines) == 5

    def test_simulate_global_seed_and_budget(self, runner, tmp_path):
        """Test --seed and --budget, and their environment variables, override the experiment file."""
        config = tmp_path / "experiment.json"
        config.write_text(
            json.dumps(
                {
                    "grid": {"n_space": 16, "dt": 0.001, "horizon": 0.005},
                    "eps": [0.5, 0.25],
                    "replicas": 2,
                    "seed": 3,
                    "constants_budget": 256,
                }
            ),
            encoding="utf-8",
        )

        def experiment_of(result):
            assert result.exit_code == 0
            payload, _ = json.JSONDecoder().raw_decode(result.output[result.output.index("{") :])
            return payload["experiment"]

        flags = runner.invoke(
            app, ["--seed", "7", "--budget", "512", "--format", "json", "simulate", "--config", str(config)]
        )
        assert experiment_of(flags)["seed"] == 7
        assert experiment_of(flags)["constants_budget"] == 512

        from_env = runner.invoke(
            app, ["--format", "json", "simulate", "--config", str(config)], env={"WZBENCH_SEED": "11"}
        )
        assert experiment_of(from_env)["seed"] == 11
        assert experiment_of(from_env)["constants_budget"] == 256

        plain = runner.invoke(app, ["--format", "json", "simulate", "--config", str(config)])
        assert experiment_of(plain)["seed"] == 3

    def test_simulate_bad_config(self, runner, tmp_path):
        """Test an invalid experiment file is a usage error."""
        config = tmp_path / "experiment.json"
        config.write_text(json.dumps({"eps": [0.1, 0.2]}), encoding="utf-8")
        result = runner.invoke(app, ["simulate", "--config", str(config)])
        assert result.exit_code == 2
        assert "eps" in result.output


if __name__ == "__main__":
    pytest.main([__file__])
