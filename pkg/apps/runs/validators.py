"""
Validators shared by the run configuration serializers.
"""
import math

from django.core.exceptions import ValidationError

from apps.experiments.monitors import MONITORS
from apps.shears.catalog import available


def validate_profile_name(value):
    """Profile must be one of the catalog shears."""
    if value not in available():
        raise ValidationError(f"Unknown profile '{value}'. Available: {', '.join(available())}.")


def validate_monitor_names(values):
    unknown = [name for name in values if name not in MONITORS]
    if unknown:
        raise ValidationError(f'Unknown monitors: {", ".join(unknown)}')


def validate_finite(value):
    if not math.isfinite(value):
        raise ValidationError('Value must be finite.')


def validate_nu_list(values):
    """At least two positive viscosities."""
    if len(values) < 2:
        raise ValidationError('Sweep needs at least two viscosities.')
    if any(not nu > 0 for nu in values):
        raise ValidationError('Sweep viscosities must be positive.')
    if len(set(values)) != len(values):
        raise ValidationError('Sweep viscosities must be distinct.')


def validate_window(values):
    if len(values) != 2:
        raise ValidationError('Fit window needs exactly two times.')
    if not 0 <= values[0] < values[1]:
        raise ValidationError('Fit window must satisfy 0 <= t1 < t2.')
