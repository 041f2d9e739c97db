from fractions import Fraction
from typing import Any, Sequence


class WZBenchError(Exception):
    pass


class ValidationError(WZBenchError):
    pass


class GraphValidationError(ValidationError):
    pass


class ParseError(ValidationError):
    pass


class DomainError(WZBenchError):
    pass


class UndefinedHomogeneityError(WZBenchError):
    pass


class ResourceLimitError(WZBenchError):
    pass


class OracleError(WZBenchError):
    pass


class ToleranceError(WZBenchError):
    pass


class FitError(WZBenchError):
    pass


class DegenerateConfigurationError(WZBenchError):
    pass


class NumericalError(WZBenchError):
    pass


def validate_scaling_norm(s: Any) -> None:
    if isinstance(s, bool) or not isinstance(s, int):
        raise ValidationError(f"Invalid scaling norm {s!r}: |s| must be a positive integer.")
    if s <= 0:
        raise ValidationError(f"Invalid scaling norm {s}: |s| must be positive.")


def validate_epsilon(eps: float) -> None:
    if not 0.0 < eps <= 1.0:
        raise ValidationError(f"Invalid epsilon {eps}: expected a value in (0, 1].")


def validate_probabilities(probabilities: Sequence[Fraction]) -> None:
    if any(p < 0 for p in probabilities):
        raise ValidationError("Invalid distribution: negative probability.")
    total = sum(probabilities, Fraction(0))
    if total != 1:
        raise ValidationError(f"Invalid distribution: probabilities sum to {total}, not 1.")


def validate_geometric_grid(values: Sequence[float], minimum: int = 4) -> None:
    if len(values) < minimum:
        raise ValidationError(
            f"Grid too short ({len(values)} points): at least {minimum} points are required."
        )
    if any(v <= 0 for v in values):
        raise ValidationError("Grid values must be positive.")
    ratios = [values[i + 1] / values[i] for i in range(len(values) - 1)]
    if max(ratios) - min(ratios) > 1e-9 * max(abs(r) for r in ratios):
        raise ValidationError("Grid must be geometric (constant ratio between points).")
