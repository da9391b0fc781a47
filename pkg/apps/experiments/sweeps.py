"""
Viscosity sweeps for the enhanced-diffusion time-scale.

Each ν is an independent trajectory; trajectories fan out to a process pool
and the results are reduced in ν order, so the output does not depend on the
pool size.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from django.conf import settings

from apps.common.exceptions import ConfigurationError, InsufficientSpan, ThresholdNotReached
from apps.ledger.coefficients import build_ledger
from apps.shears.catalog import get_profile
from apps.simulation import couette
from apps.simulation.evolve import EvolveConfig, run
from apps.simulation.functionals import weighted_norm
from apps.simulation.grid import HYPOELLIPTIC, Grid
from apps.simulation.initial import InitialData, initial_state

from .fitting import RateFit, fit_power_law, tau_closed_form
from .trajectory import resolve_frakU, sample_times, trajectory_id

logger = logging.getLogger(__name__)

SOLVER = 'solver'
ORACLE = 'oracle'
SOURCES = (SOLVER, ORACLE)
DEFAULT_THRESHOLD = 0.01
MIN_DECADES = 2.0
EXPECTED_EXPONENT = -1.0 / 3.0


@dataclass(frozen=True)
class SweepTask:
    """Everything one worker needs, in picklable form."""

    profile: str
    params: Tuple[Tuple[str, float], ...]
    k: int
    nu: float
    model: str
    L: float
    N: int
    init: InitialData
    dt: float
    T: float
    sample_every: int
    threshold: float
    source: str = SOLVER
    frakU: float = 1.0
    phase_cap: Optional[float] = None
    guard_tol: Optional[float] = None

    @property
    def trajectory_id(self) -> str:
        return trajectory_id(self.profile, self.k, self.nu, self.model)

    def evolve_config(self) -> EvolveConfig:
        options = {}
        if self.phase_cap is not None:
            options['phase_cap'] = self.phase_cap
        if self.guard_tol is not None:
            options['guard_tol'] = self.guard_tol
        return EvolveConfig(dt=self.dt, T=self.T, sample_every=self.sample_every, **options)


@dataclass(frozen=True)
class SweepPoint:
    trajectory_id: str
    nu: float
    tau: float
    ledger_rate: float
    # ln(1/threshold)/τ, the effective exponential rate seen by the run.
    measured_rate: float
    # Closed-form Couette time-scale; None for other profiles.
    reference_tau: Optional[float] = None


@dataclass(frozen=True)
class SweepResult:
    profile: str
    k: int
    model: str
    threshold: float
    source: str
    points: List[SweepPoint]
    fit: RateFit
    expected_exponent: float = EXPECTED_EXPONENT
    params: Dict[str, float] = field(default_factory=dict)

    def as_dict(self):
        data = asdict(self)
        data['fit'] = self.fit.as_dict()
        return data


class _Crossed(Exception):
    def __init__(self, t: float):
        super().__init__(t)
        self.t = t


def _oracle_tau(task: SweepTask) -> float:
    spectrum = couette.spectrum_from_initial(task.init, task.k, task.model)
    start = None
    for t in sample_times(task.evolve_config()):
        l2 = couette.exact_norms(spectrum, task.nu, t)[0]
        start = l2 if start is None else start
        if l2 <= task.threshold * start:
            return t
    return math.inf


def _solver_tau(task: SweepTask) -> float:
    profile = get_profile(task.profile, **dict(task.params))
    grid = Grid(task.L, task.N)
    s0 = initial_state(task.init, grid, task.k, task.model)
    target = task.threshold * weighted_norm(s0, profile)

    def crossing(state):
        if weighted_norm(state, profile) <= target:
            raise _Crossed(state.t)

    try:
        run(s0, task.evolve_config(), task.nu, profile, [crossing])
    except _Crossed as hit:
        return hit.t
    return math.inf


def first_crossing(task: SweepTask) -> SweepPoint:
    """τ(ν): first sampled t with weighted(t)/weighted(0) ≤ threshold."""
    tau = _oracle_tau(task) if task.source == ORACLE else _solver_tau(task)
    if math.isinf(tau):
        raise ThresholdNotReached(
            trajectory=task.trajectory_id, nu=task.nu, T=task.T, threshold=task.threshold,
        )
    ledger = build_ledger(task.frakU, task.nu, task.k)
    reference = tau_closed_form(task.nu, task.threshold, task.k) if task.profile == 'couette' else None
    logger.info(f'{task.trajectory_id}: tau={tau:g}')
    return SweepPoint(
        trajectory_id=task.trajectory_id, nu=task.nu, tau=tau, ledger_rate=ledger.decay_rate,
        measured_rate=math.log(1.0 / task.threshold) / tau, reference_tau=reference,
    )


def check_sweep(nu_list: Sequence[float], threshold: float) -> List[float]:
    nus = sorted(float(nu) for nu in nu_list)
    if any(nu <= 0 for nu in nus):
        raise ConfigurationError('Sweep viscosities must be positive.', nu_list=nus)
    if len(nus) < 2 or math.log10(nus[-1] / nus[0]) < MIN_DECADES - 1e-12:
        raise InsufficientSpan(nu_list=nus)
    if not 0 < threshold < 1:
        raise ConfigurationError('Threshold must lie in (0, 1).', threshold=threshold)
    return nus


def sweep_enhanced_diffusion(
    profile: str,
    k: int,
    nu_list: Sequence[float],
    threshold: float = DEFAULT_THRESHOLD,
    *,
    init: InitialData,
    grid: Grid,
    cfg: EvolveConfig,
    model: str = HYPOELLIPTIC,
    params: Optional[Dict[str, float]] = None,
    source: str = SOLVER,
    workers: Optional[int] = None,
    frakU: Optional[float] = None,
) -> SweepResult:
    """Fit log τ(ν) against log ν; the exponent is expected near −1/3."""
    nus = check_sweep(nu_list, threshold)
    if source not in SOURCES:
        raise ConfigurationError(f"Unknown sweep source '{source}'.", source=source)
    if source == ORACLE and profile != 'couette':
        raise ConfigurationError('The oracle sweep needs the couette profile.', profile=profile)
    params = dict(params or {})
    frakU = resolve_frakU(get_profile(profile, **params), grid, frakU)
    init.check_support(grid)
    workers = int(workers or settings.HYPOMIX['WORKERS'])

    tasks = [
        SweepTask(
            profile=profile, params=tuple(sorted(params.items())), k=k, nu=nu, model=model,
            L=grid.L, N=grid.N, init=init, dt=cfg.dt, T=cfg.T, sample_every=cfg.sample_every,
            threshold=threshold, source=source, frakU=frakU, phase_cap=cfg.phase_cap, guard_tol=cfg.guard_tol,
        )
        for nu in nus
    ]
    logger.info(f'Sweep {profile} k={k} over {len(tasks)} viscosities with {workers} worker(s)')
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(first_crossing, tasks))
    else:
        points = [first_crossing(task) for task in tasks]
    points.sort(key=lambda p: p.nu)

    fit = fit_power_law([p.nu for p in points], [p.tau for p in points], window=(nus[0], nus[-1]))
    logger.info(f'Sweep {profile}: tau exponent {fit.exponent:.4f} (expected {EXPECTED_EXPONENT:.4f})')
    return SweepResult(
        profile=profile, k=k, model=model, threshold=threshold, source=source,
        points=points, fit=fit, params=params,
    )

