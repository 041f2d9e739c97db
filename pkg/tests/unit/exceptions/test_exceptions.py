#!/usr/bin/env python3
"""
Unit Tests for wzbench exceptions

Following coding standards:
- Unit Tests Primary: Test individual functions in isolation
- Fail Fast: Tests must fail immediately on any deviation from expected behavior
- No Try-Catch: Exceptions are for unrecoverable errors only
"""

# Add the src directory to Python path
import sys
from pathlib import Path

import pytest

src_path = Path(__file__).parent.parent.parent.parent / "src"
sys.path.insert(0, str(src_path))

from wzbench.exceptions import (
    DomainError,
    GraphValidationError,
    ParseError,
    ValidationError,
    WZBenchError,
    validate_epsilon,
    validate_geometric_grid,
    validate_scaling_norm,
)


class TestExceptionHierarchy:
    """Unit tests for the exception classes."""

    def test_validation_error_initialization(self):
        """Test ValidationError initialization."""
        error = ValidationError("Test validation error")

        assert str(error) == "Test validation error"
        assert isinstance(error, WZBenchError)

    def test_input_errors_are_validation_errors(self):
        """Parse and graph errors map to the invalid-input exit code."""
        assert issubclass(ParseError, ValidationError)
        assert issubclass(GraphValidationError, ValidationError)

    def test_domain_error_is_not_validation_error(self):
        """Test DomainError inheritance."""
        assert issubclass(DomainError, WZBenchError)
        assert not issubclass(DomainError, ValidationError)


class TestValidators:
    """Unit tests for the validate_* helpers."""

    def test_scaling_norm(self):
        """Positive integers only."""
        validate_scaling_norm(3)
        for bad in (0, -1, 2.5, True):
            with pytest.raises(ValidationError):
                validate_scaling_norm(bad)

    def test_epsilon(self):
        """ε must lie in (0, 1]."""
        validate_epsilon(1.0)
        validate_epsilon(1e-6)
        for bad in (0.0, -0.1, 1.5):
            with pytest.raises(ValidationError):
                validate_epsilon(bad)

    def test_geometric_grid(self):
        """Grids need four positive points with a constant ratio."""
        validate_geometric_grid([1.0, 0.5, 0.25, 0.125])
        with pytest.raises(ValidationError):
            validate_geometric_grid([1.0, 0.5, 0.25])
        with pytest.raises(ValidationError):
            validate_geometric_grid([1.0, 0.5, 0.2, 0.1])
        with pytest.raises(ValidationError):
            validate_geometric_grid([1.0, -1.0, 1.0, -1.0])


if __name__ == "__main__":
    import pytest

    pytest.main([__file__])
