from django.conf import settings
from django.core.exceptions import ValidationError as DjangoValidationError
from rest_framework import serializers

from apps.common.exceptions import HypomixError
from apps.experiments.sweeps import DEFAULT_THRESHOLD, SOURCES
from apps.shears.catalog import get_profile
from apps.simulation.evolve import EvolveConfig, check_resolution
from apps.simulation.grid import HYPOELLIPTIC, MIN_POINTS, MODELS, Grid
from apps.simulation.initial import GAUSSIAN, KINDS, InitialData

from .run_config import RunConfig, SweepSettings
from .validators import (
    validate_finite, validate_monitor_names, validate_nu_list, validate_profile_name, validate_window,
)


def _drf(validator, value):
    """Run a Django validator and re-raise its error in DRF form."""
    try:
        validator(value)
    except DjangoValidationError as exc:
        raise serializers.ValidationError(exc.messages)
    return value


class ProfileSerializer(serializers.Serializer):
    name = serializers.CharField()
    params = serializers.DictField(child=serializers.FloatField(), required=False, default=dict)

    def validate_name(self, value):
        return _drf(validate_profile_name, value)

    def validate(self, attrs):
        try:
            get_profile(attrs['name'], **attrs.get('params', {}))
        except HypomixError as exc:
            raise serializers.ValidationError({'params': exc.message})
        return attrs


class GridSerializer(serializers.Serializer):
    L = serializers.FloatField(validators=[validate_finite])
    N = serializers.IntegerField(min_value=MIN_POINTS)

    def validate_L(self, value):
        if value <= 0:
            raise serializers.ValidationError('L must be positive.')
        return value


class TimeSerializer(serializers.Serializer):
    dt = serializers.FloatField(validators=[validate_finite])
    T = serializers.FloatField(validators=[validate_finite])
    sample_every = serializers.IntegerField(min_value=1, default=1)


class InitSerializer(serializers.Serializer):
    kind = serializers.ChoiceField(choices=KINDS, default=GAUSSIAN)
    center = serializers.FloatField(default=0.0, validators=[validate_finite])
    width = serializers.FloatField(default=1.0, validators=[validate_finite])
    amplitude_re = serializers.FloatField(default=1.0, validators=[validate_finite])
    amplitude_im = serializers.FloatField(default=0.0, validators=[validate_finite])


class SweepSerializer(serializers.Serializer):
    nu_list = serializers.ListField(child=serializers.FloatField(), validators=[validate_nu_list])
    threshold = serializers.FloatField(default=DEFAULT_THRESHOLD)
    source = serializers.ChoiceField(choices=SOURCES, default='solver')
    workers = serializers.IntegerField(min_value=1, required=False)

    def validate_threshold(self, value):
        if not 0 < value < 1:
            raise serializers.ValidationError('Threshold must lie in (0, 1).')
        return value


class FitSerializer(serializers.Serializer):
    window = serializers.ListField(child=serializers.FloatField(), validators=[validate_window])


class RunConfigSerializer(serializers.Serializer):
    """Validates a nested run configuration and builds a ``RunConfig``."""

    profile = ProfileSerializer()
    model = serializers.ChoiceField(choices=MODELS, default=HYPOELLIPTIC)
    k = serializers.IntegerField(min_value=1)
    nu = serializers.FloatField(min_value=0.0, validators=[validate_finite])
    grid = GridSerializer()
    time = TimeSerializer()
    init = InitSerializer(required=False)
    monitors = serializers.ListField(child=serializers.CharField(), required=False, default=list)
    seed = serializers.IntegerField(min_value=0, default=0)
    guard_tol = serializers.FloatField(min_value=0.0, required=False)
    phase_cap = serializers.FloatField(required=False)
    sweep = SweepSerializer(required=False)
    fit = FitSerializer(required=False)

    def validate_monitors(self, value):
        return _drf(validate_monitor_names, value)

    def validate_phase_cap(self, value):
        if not value > 0:
            raise serializers.ValidationError('phase_cap must be positive.')
        return value

    def validate(self, attrs):
        """Check the run against the discretisation and stepping preconditions."""
        defaults = settings.HYPOMIX
        init = attrs.get('init') or InitSerializer().to_internal_value({})
        try:
            grid = Grid(attrs['grid']['L'], attrs['grid']['N'])
        except HypomixError as exc:
            raise serializers.ValidationError({'grid': exc.message})
        try:
            cfg = EvolveConfig(
                dt=attrs['time']['dt'],
                T=attrs['time']['T'],
                sample_every=attrs['time']['sample_every'],
                phase_cap=attrs.get('phase_cap', defaults['PHASE_CAP']),
                guard_tol=attrs.get('guard_tol', defaults['GUARD_TOL']),
            )
            cfg.n_steps  # raises unless T is a whole number of steps
        except HypomixError as exc:
            raise serializers.ValidationError({'time': exc.message})
        try:
            data = InitialData(
                kind=init['kind'],
                center=init['center'],
                width=init['width'],
                amplitude=complex(init['amplitude_re'], init['amplitude_im']),
            )
            data.check_support(grid)
        except HypomixError as exc:
            raise serializers.ValidationError({'init': exc.message})
        profile = attrs['profile']
        try:
            check_resolution(cfg, grid, attrs['k'], attrs['nu'], get_profile(profile['name'], **profile['params']))
        except HypomixError as exc:
            raise serializers.ValidationError({'time': exc.message})
        attrs['init'] = data
        attrs['grid'] = grid
        attrs['time'] = cfg
        return attrs

    def create(self, validated_data):
        sweep = validated_data.get('sweep')
        fit = validated_data.get('fit')
        return RunConfig(
            profile=validated_data['profile']['name'],
            params=dict(validated_data['profile']['params']),
            model=validated_data['model'],
            k=validated_data['k'],
            nu=validated_data['nu'],
            grid=validated_data['grid'],
            time=validated_data['time'],
            init=validated_data['init'],
            monitors=tuple(validated_data['monitors']),
            seed=validated_data['seed'],
            sweep=SweepSettings(
                nu_list=tuple(sorted(sweep['nu_list'])),
                threshold=sweep['threshold'],
                source=sweep['source'],
                workers=sweep.get('workers'),
            ) if sweep else None,
            fit_window=tuple(fit['window']) if fit else None,
        )
