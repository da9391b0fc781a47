"""Immutable run configuration built by ``RunConfigSerializer``."""
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from apps.shears.catalog import ShearProfile, get_profile
from apps.simulation.evolve import EvolveConfig
from apps.simulation.grid import Grid
from apps.simulation.initial import InitialData


@dataclass(frozen=True)
class SweepSettings:
    nu_list: Tuple[float, ...]
    threshold: float = 0.01
    source: str = 'solver'
    workers: Optional[int] = None


@dataclass(frozen=True)
class RunConfig:
    profile: str
    k: int
    nu: float
    grid: Grid
    time: EvolveConfig
    init: InitialData
    model: str = 'hypoelliptic'
    params: Dict[str, float] = field(default_factory=dict)
    monitors: Tuple[str, ...] = ()
    seed: int = 0
    sweep: Optional[SweepSettings] = None
    fit_window: Optional[Tuple[float, float]] = None

    def shear(self) -> ShearProfile:
        return get_profile(self.profile, **self.params)

    def as_dict(self):
        """Plain nested dict in the key layout of the config file."""
        amplitude = complex(self.init.amplitude)
        data = {
            'profile': {'name': self.profile, 'params': dict(sorted(self.params.items()))},
            'model': self.model,
            'k': self.k,
            'nu': self.nu,
            'grid': {'L': self.grid.L, 'N': self.grid.N},
            'time': {'dt': self.time.dt, 'T': self.time.T, 'sample_every': self.time.sample_every},
            'init': {
                'kind': self.init.kind,
                'center': self.init.center,
                'width': self.init.width,
                'amplitude_re': amplitude.real,
                'amplitude_im': amplitude.imag,
            },
            'monitors': list(self.monitors),
            'seed': self.seed,
            'guard_tol': self.time.guard_tol,
            'phase_cap': self.time.phase_cap,
        }
        if self.sweep is not None:
            data['sweep'] = {
                'nu_list': list(self.sweep.nu_list),
                'threshold': self.sweep.threshold,
                'source': self.sweep.source,
            }
            if self.sweep.workers is not None:
                data['sweep']['workers'] = self.sweep.workers
        if self.fit_window is not None:
            data['fit'] = {'window': list(self.fit_window)}
        return data
