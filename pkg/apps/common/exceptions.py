"""
Error hierarchy shared by every hypomix app.

Each error carries a machine-readable ``code`` (same convention as DRF's
``default_code``) and a ``context`` dict that is echoed as JSON by the
management commands.
"""
from typing import Any, Dict, Optional


class HypomixError(Exception):
    """Base class for all laboratory errors."""

    default_code = 'error'
    default_message = 'Laboratory error.'

    def __init__(self, message: Optional[str] = None, code: Optional[str] = None, **context: Any):
        self.message = message or self.default_message
        self.code = code or self.default_code
        self.context: Dict[str, Any] = context
        super().__init__(self.message)

    def with_context(self, **context: Any) -> 'HypomixError':
        self.context.update(context)
        return self

    def as_dict(self) -> Dict[str, Any]:
        payload = {'error': self.code, 'message': self.message}
        if self.context:
            payload['context'] = {key: _jsonable(value) for key, value in self.context.items()}
        return payload


def _jsonable(value):
    if isinstance(value, (str, int, bool)) or value is None:
        return value
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    try:
        return float(value)
    except (TypeError, ValueError):
        return str(value)


class NonMonotone(HypomixError):
    default_code = 'non_monotone'
    default_message = 'Shear profile is not strictly increasing on the domain.'


class ConstraintViolation(HypomixError):
    default_code = 'constraint_violation'
    default_message = 'A coefficient constraint does not hold.'


class SolveFailure(HypomixError):
    default_code = 'solve_failure'
    default_message = 'Banded linear solve failed.'


class BoundaryBreach(HypomixError):
    default_code = 'boundary_breach'
    default_message = 'Solution reached the truncation boundary.'


class NonFinite(HypomixError):
    default_code = 'non_finite'
    default_message = 'State contains NaN or Inf values.'


class AliasRisk(HypomixError):
    default_code = 'alias_risk'
    default_message = 'Spectrum exceeds the grid Nyquist frequency.'


class ResolutionError(HypomixError):
    default_code = 'resolution_error'
    default_message = 'Grid or time step does not resolve the run.'


class ConfigurationError(HypomixError):
    default_code = 'configuration_error'
    default_message = 'Invalid run configuration.'


class RestrictionUnmet(HypomixError):
    default_code = 'restriction_unmet'
    default_message = 'Viscosity restriction of the estimate is not met.'


class InsufficientDecay(HypomixError):
    default_code = 'insufficient_decay'
    default_message = 'Series does not decay enough over the fit window.'


class ThresholdNotReached(HypomixError):
    default_code = 'threshold_not_reached'
    default_message = 'Run ended above the decay threshold; increase T.'


class InsufficientSpan(HypomixError):
    default_code = 'insufficient_span'
    default_message = 'Viscosity list must span at least two decades.'


class MismatchedGrids(HypomixError):
    default_code = 'mismatched_grids'
    default_message = 'Per-mode records do not share a time grid.'


class OutputError(HypomixError):
    default_code = 'output_error'
    default_message = 'Could not write output file.'
