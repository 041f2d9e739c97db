"""
Integration tests for all CLI help commands.

Tests that every command displays its help and exits cleanly.
"""

import sys
from pathlib import Path

import pytest
from typer.testing import CliRunner

sys.path.insert(0, str(Path(__file__).parent.parent.parent.parent / "src"))

try:
    from cli import app
except ImportError:
    from src.cli import app

COMMANDS = [
    "check-graph",
    "contract",
    "verify-theorems",
    "constants",
    "scaling",
    "norms",
    "cumulants",
    "simulate",
    "symbols",
]


@pytest.fixture
def runner():
    """Create a CLI runner for testing."""
    return CliRunner()


class TestAllCLIHelp:
    """Comprehensive tests for all CLI help commands."""

    def test_main_help_lists_every_command(self, runner):
        """Test the top-level help names every command."""
        result = runner.invoke(app, ["--help"])

        assert result.exit_code == 0
        for cmd in COMMANDS:
            assert cmd in result.output, f"{cmd} missing from --help"

    @pytest.mark.parametrize("cmd", COMMANDS)
    def test_command_help(self, runner, cmd):
        """Test each command help displays."""
        result = runner.invoke(app, [cmd, "--help"])

        assert result.exit_code == 0, f"Command failed: {cmd} --help\nOutput: {result.output}"
        assert "Usage" in result.output

    @pytest.mark.parametrize("flag", ["--help", "-h"])
    def test_help_flags(self, runner, flag):
        """Test help flags are handled properly."""
        result = runner.invoke(app, ["symbols", flag])

        if flag == "-h":
            assert result.exit_code == 2
        else:
            assert result.exit_code == 0


if __name__ == "__main__":
    pytest.main([__file__])
