"""
Flat run configuration files.

A run file is a ``key.path = value`` text file, the same KEY=VALUE format
decouple reads for ``.env``; lists are comma separated. Values are cast with
decouple and nested into the layout ``RunConfigSerializer`` validates.
"""
import logging
from pathlib import Path

from decouple import Config, Csv, RepositoryEnv, UndefinedValueError

from apps.common.exceptions import ConfigurationError

from .run_config import RunConfig
from .serializers import RunConfigSerializer

logger = logging.getLogger(__name__)

PARAM_PREFIX = 'profile.params.'

# key -> decouple cast
KEYS = {
    'profile.name': str,
    'model': str,
    'k': int,
    'nu': float,
    'grid.L': float,
    'grid.N': int,
    'time.dt': float,
    'time.T': float,
    'time.sample_every': int,
    'init.kind': str,
    'init.center': float,
    'init.width': float,
    'init.amplitude_re': float,
    'init.amplitude_im': float,
    'monitors': Csv(),
    'seed': int,
    'guard_tol': float,
    'phase_cap': float,
    'sweep.nu_list': Csv(cast=float),
    'sweep.threshold': float,
    'sweep.source': str,
    'sweep.workers': int,
    'fit.window': Csv(cast=float),
}


def _nest(flat):
    nested = {}
    for key, value in flat.items():
        parts = key.split('.')
        node = nested
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value
    return nested


def read_config_file(path) -> dict:
    """Nested dict of the cast values present in the file."""
    path = Path(path)
    try:
        repository = RepositoryEnv(str(path))
    except OSError as exc:
        raise ConfigurationError(f'Cannot read config file: {exc.strerror}', path=str(path))
    config = Config(repository)

    unknown = sorted(
        key for key in repository.data
        if key not in KEYS and not key.startswith(PARAM_PREFIX)
    )
    if unknown:
        raise ConfigurationError(f"Unknown config keys: {', '.join(unknown)}", path=str(path), keys=unknown)

    flat = {}
    for key in repository.data:
        cast = float if key.startswith(PARAM_PREFIX) else KEYS[key]
        try:
            flat[key] = config(key, cast=cast)
        except (ValueError, UndefinedValueError) as exc:
            raise ConfigurationError(f"Invalid value for '{key}': {exc}", path=str(path), key=key)
    return _nest(flat)


def build_run_config(data: dict, source: str = '<dict>') -> RunConfig:
    serializer = RunConfigSerializer(data=data)
    if not serializer.is_valid():
        raise ConfigurationError('Invalid run configuration.', path=source, errors=serializer.errors)
    return serializer.save()


def load_config(path) -> RunConfig:
    cfg = build_run_config(read_config_file(path), str(path))
    logger.info(f'Loaded {path}: {cfg.profile} k={cfg.k} nu={cfg.nu:g} model={cfg.model}')
    return cfg
