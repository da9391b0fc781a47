"""Sampled functional records of one run, with the data the monitors need."""
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional

import numpy as np

from apps.ledger.coefficients import CoeffLedger, build_ledger, check_nu_restriction
from apps.shears.catalog import ShearProfile
from apps.shears.certificate import certify_hypothesis
from apps.simulation.couette import CouetteSpectrum, oracle_records
from apps.simulation.evolve import EvolveConfig, run
from apps.simulation.functionals import FunctionalRecord, record
from apps.simulation.grid import Grid, ModeState
from apps.simulation.initial import InitialData, initial_state

logger = logging.getLogger(__name__)


def trajectory_id(profile: str, k: int, nu: float, model: str) -> str:
    return f'{profile}-k{k}-nu{nu:g}-{model}'


@dataclass(frozen=True, eq=False)
class Trajectory:
    trajectory_id: str
    profile: ShearProfile
    ledger: CoeffLedger
    model: str
    records: List[FunctionalRecord] = field(default_factory=list)
    source: str = 'solver'

    @property
    def k(self) -> int:
        return self.ledger.k

    @property
    def nu(self) -> float:
        return self.ledger.nu

    @property
    def regime(self) -> str:
        return check_nu_restriction(self.ledger, self.nu, self.k)

    @property
    def initial(self) -> FunctionalRecord:
        return self.records[0]

    def series(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    @property
    def times(self) -> np.ndarray:
        return self.series('t')

    def lemma_gaps(self) -> np.ndarray:
        """2𝔘²(‖g‖ + ‖Jg‖) − kt‖g‖_{Ḣ^{-1}} at every sample."""
        U2 = self.ledger.frakU ** 2
        return np.array([
            2.0 * U2 * (r.l2 + r.j_l2) - self.k * r.t * r.hminus1 for r in self.records
        ])


class RecordSink:
    """Evolution sink turning each sampled state into a functional record."""

    def __init__(self, profile: ShearProfile, ledger: CoeffLedger):
        self.profile = profile
        self.ledger = ledger
        self.records: List[FunctionalRecord] = []

    def __call__(self, state: ModeState) -> None:
        self.records.append(record(state, self.profile, self.ledger))


def resolve_frakU(profile: ShearProfile, grid: Grid, frakU: Optional[float] = None) -> float:
    if frakU is not None:
        return float(frakU)
    return certify_hypothesis(profile, grid.L).frakU


def simulate(
    profile: ShearProfile,
    init: InitialData,
    grid: Grid,
    k: int,
    nu: float,
    model: str,
    cfg: EvolveConfig,
    frakU: Optional[float] = None,
) -> Trajectory:
    """Evolve one mode and record every sample."""
    ledger = build_ledger(resolve_frakU(profile, grid, frakU), nu, k)
    s0 = initial_state(init, grid, k, model)
    sink = RecordSink(profile, ledger)
    summary = run(s0, cfg, nu, profile, [sink])
    tid = trajectory_id(profile.name, k, nu, model)
    logger.info(f'Trajectory {tid}: {summary.n_samples} samples up to t={summary.t_final:g}')
    return Trajectory(trajectory_id=tid, profile=profile, ledger=ledger, model=model, records=sink.records)


def sample_times(cfg: EvolveConfig) -> List[float]:
    """The sample times ``run`` would produce for this configuration."""
    n_steps = cfg.n_steps
    steps = list(range(0, n_steps + 1, cfg.sample_every))
    if steps[-1] != n_steps:
        steps.append(n_steps)
    return [n * cfg.dt for n in steps]


def from_oracle(
    spectrum: CouetteSpectrum,
    nu: float,
    times: Iterable[float],
    grid: Grid,
    profile: ShearProfile,
) -> Trajectory:
    """Trajectory of the closed-form Couette solution at the given times."""
    ledger = build_ledger(1.0, nu, spectrum.k)
    rows = oracle_records(spectrum, nu, times, grid, profile, ledger)
    tid = trajectory_id(profile.name, spectrum.k, nu, spectrum.model) + '-oracle'
    return Trajectory(
        trajectory_id=tid, profile=profile, ledger=ledger, model=spectrum.model, records=rows, source='oracle',
    )


def decay_time(trajectory: Trajectory, threshold: float, series: str = 'weighted') -> float:
    """First sampled t with series(t)/series(0) ≤ threshold; inf when never reached."""
    values = trajectory.series(series)
    below = np.nonzero(values <= threshold * values[0])[0]
    if below.size == 0:
        return math.inf
    return float(trajectory.times[below[0]])
