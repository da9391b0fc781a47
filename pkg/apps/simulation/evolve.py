"""
Strang-split time stepping of one Fourier mode.

    ∂_t g = −ik u(y) g + ν ∂_yy g            (hypoelliptic)
    ∂_t g = −ik u(y) g + ν (∂_yy − k²) g     (full Laplacian)

Half-step exact phase, Crank–Nicolson diffusion, half-step phase. With ν = 0
the step is pointwise unitary.
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable, List, Optional

import numpy as np

from apps.common.exceptions import ConfigurationError, HypomixError, NonMonotone, ResolutionError
from apps.shears.catalog import ShearProfile

from .grid import (
    FULL_LAPLACIAN, Grid, ModeState, check_guard, diff1, diff2, laplacian_apply, shifted_solve,
)

logger = logging.getLogger(__name__)

STRANG_SPLIT = 'strang_split'
DEFAULT_PHASE_CAP = math.pi / 4.0
DEFAULT_GUARD_TOL = 1e-8
NYQUIST_FRACTION = math.pi / 2.0

Sink = Callable[[ModeState], None]


@dataclass(frozen=True)
class EvolveConfig:
    dt: float
    T: float
    sample_every: int = 1
    scheme: str = STRANG_SPLIT
    phase_cap: float = DEFAULT_PHASE_CAP
    guard_tol: float = DEFAULT_GUARD_TOL

    def __post_init__(self):
        if not self.dt > 0 or not self.T > 0:
            raise ConfigurationError('dt and T must be positive.', dt=self.dt, T=self.T)
        if int(self.sample_every) != self.sample_every or self.sample_every < 1:
            raise ConfigurationError('sample_every must be an integer >= 1.', sample_every=self.sample_every)
        if self.scheme != STRANG_SPLIT:
            raise ConfigurationError(f"Unknown scheme '{self.scheme}'.", scheme=self.scheme)

    @property
    def n_steps(self) -> int:
        ratio = self.T / self.dt
        n = int(round(ratio))
        if n < 1 or abs(n - ratio) > 1e-9 * ratio:
            raise ConfigurationError('T must be an integer multiple of dt.', dt=self.dt, T=self.T)
        return n


@dataclass(frozen=True)
class TrajectorySummary:
    n_steps: int
    n_samples: int
    t_final: float
    final: ModeState


def check_resolution(cfg: EvolveConfig, grid: Grid, k: int, nu: float, profile: ShearProfile) -> None:
    """Advective phase cap on dt and, for ν = 0, the mixing Nyquist rule on h."""
    u = profile.u(grid.y)
    phase = cfg.dt * k * float(np.abs(u).max())
    if phase > cfg.phase_cap:
        raise ResolutionError(
            'Time step does not resolve the advective phase.',
            phase=phase, phase_cap=cfg.phase_cap, dt=cfg.dt,
        )
    if nu == 0:
        reach = grid.h * k * cfg.T * float(np.abs(profile.u1(grid.y)).max())
        if reach > NYQUIST_FRACTION:
            raise ResolutionError(
                'Grid cannot resolve the wavenumbers generated by mixing up to T.',
                h=grid.h, T=cfg.T, reach=reach, limit=NYQUIST_FRACTION,
            )


class Demodulation:
    """
    y-derivatives of states carrying the transport phase e^{−iktu}.

    With w = e^{iktu}v, ∂_y v = e^{−iktu}(∂_y w − iktu′w), so only the slowly
    varying w is differenced. J is the exact conjugate e^{−iktu}∂_y e^{iktu}.
    """

    def __init__(self, kt: float, u, u1, u2, h: float):
        self.phase = np.exp(1j * kt * u)
        self.slope = kt * u1
        self.curvature = kt * u2
        self.h = h

    def J(self, v: np.ndarray) -> np.ndarray:
        return diff1(self.phase * v, self.h) / self.phase

    def d1(self, v: np.ndarray) -> np.ndarray:
        return self.J(v) - 1j * self.slope * v

    def d2(self, v: np.ndarray) -> np.ndarray:
        w = self.phase * v
        return (
            diff2(w, self.h)
            - 2j * self.slope * diff1(w, self.h)
            - (1j * self.curvature + self.slope ** 2) * w
        ) / self.phase


def demodulation(s: ModeState, p: ShearProfile) -> Demodulation:
    y = s.grid.y
    return Demodulation(s.k * s.t, p.u(y), p.u1(y), p.u2(y), s.grid.h)


def commutator_source(g, F, u1, u2, u3, dm: Demodulation, nu: float) -> np.ndarray:
    """ν[(u‴/u′)(F − ∂_y g) − 2∂_y((u″/u′)(F − ∂_y g))], the forcing in the equation for F = Jg."""
    defect = F - dm.d1(g)
    return nu * ((u3 / u1) * defect - 2.0 * dm.d1((u2 / u1) * defect))


class SplitStepper:
    """Precomputed phase, diffusion factor and damping for repeated steps."""

    def __init__(self, grid: Grid, k: int, nu: float, profile: ShearProfile, dt: float, model: str):
        if nu < 0:
            raise ConfigurationError('nu must be >= 0.', nu=nu)
        self.grid = grid
        self.k = k
        self.nu = float(nu)
        self.dt = float(dt)
        self.profile = profile
        phase = np.exp(-0.5j * k * dt * profile.u(grid.y))
        self.half_phase = phase / np.abs(phase)
        self.half_diffusion = 0.5 * self.nu * self.dt
        self.damping = math.exp(-self.nu * k * k * self.dt) if model == FULL_LAPLACIAN else 1.0
        self._shear = None

    def _crank_nicolson(self, g: np.ndarray, extra: Optional[np.ndarray] = None) -> np.ndarray:
        rhs = g + self.half_diffusion * laplacian_apply(g, self.grid.h)
        if extra is not None:
            rhs = rhs + extra
        return shifted_solve(self.grid, 1.0, self.half_diffusion, rhs)

    def advance(self, g: np.ndarray) -> np.ndarray:
        g = self.half_phase * g
        if self.nu > 0:
            g = self._crank_nicolson(g)
            if self.damping != 1.0:
                g = self.damping * g
        return self.half_phase * g

    def _shear_values(self):
        if self._shear is None:
            d = self.profile.evaluate(self.grid.y)
            if np.any(d['u1'] <= 0):
                raise NonMonotone("Direct J evolution needs u' > 0.", profile=self.profile.name)
            self._shear = d
        return self._shear

    def demodulation(self, t: float) -> Demodulation:
        d = self._shear_values()
        return Demodulation(self.k * t, d['u'], d['u1'], d['u2'], self.grid.h)

    def source(self, g: np.ndarray, F: np.ndarray, dm: Demodulation) -> np.ndarray:
        d = self._shear_values()
        return commutator_source(g, F, d['u1'], d['u2'], d['u3'], dm, self.nu)

    def advance_pair(self, g: np.ndarray, F: np.ndarray, t: float):
        """Advance (g, Jg) from t by one step; the source is integrated with Heun's rule."""
        g = self.half_phase * g
        F = self.half_phase * F
        if self.nu > 0:
            # After the half phase both sit in the transport frame of the midpoint.
            dm = self.demodulation(t + 0.5 * self.dt)
            g_next = self._crank_nicolson(g)
            s0 = self.source(g, F, dm)
            F_pred = self._crank_nicolson(F, self.dt * s0)
            s1 = self.source(g_next, F_pred, dm)
            F = self._crank_nicolson(F, 0.5 * self.dt * (s0 + s1))
            g = g_next
            if self.damping != 1.0:
                g = self.damping * g
                F = self.damping * F
        return self.half_phase * g, self.half_phase * F


def step(s: ModeState, cfg: EvolveConfig, nu: float, p: ShearProfile) -> ModeState:
    """One Strang step; guard checked before and after."""
    check_guard(s, cfg.guard_tol)
    stepper = SplitStepper(s.grid, s.k, nu, p, cfg.dt, s.model)
    nxt = s.evolved(stepper.advance(s.g), s.t + cfg.dt)
    check_guard(nxt, cfg.guard_tol)
    return nxt


def _emit(sinks: Iterable[Sink], state) -> None:
    for sink in sinks:
        sink(state)


def run(
    s0: ModeState,
    cfg: EvolveConfig,
    nu: float,
    p: ShearProfile,
    sinks: Optional[List[Sink]] = None,
) -> TrajectorySummary:
    """
    Advance s0 to s0.t + T, calling every sink at t = s0.t and then every
    ``sample_every`` steps (the final step is always sampled).

    Times are n·dt from the start, so identical inputs give identical output.
    """
    sinks = list(sinks or [])
    n_steps = cfg.n_steps
    check_resolution(cfg, s0.grid, s0.k, nu, p)
    check_guard(s0, cfg.guard_tol)
    stepper = SplitStepper(s0.grid, s0.k, nu, p, cfg.dt, s0.model)

    logger.info(
        f"Running {p.name} k={s0.k} nu={nu:g} model={s0.model} N={s0.grid.N} "
        f"dt={cfg.dt:g} T={cfg.T:g} ({n_steps} steps)"
    )
    state = s0
    _emit(sinks, state)
    n_samples = 1
    for n in range(1, n_steps + 1):
        t = s0.t + n * cfg.dt
        try:
            state = state.evolved(stepper.advance(state.g), t)
            check_guard(state, cfg.guard_tol)
        except HypomixError as exc:
            logger.error(f'Integration stopped at t={t:g}: {exc.message}')
            raise exc.with_context(t=t, step=n)
        if n % cfg.sample_every == 0 or n == n_steps:
            _emit(sinks, state)
            n_samples += 1
    return TrajectorySummary(n_steps=n_steps, n_samples=n_samples, t_final=state.t, final=state)


def apply_J(s: ModeState, p: ShearProfile) -> np.ndarray:
    """Jg = ∂_y g + ikt u′ g, differenced in the transport frame of the state."""
    return demodulation(s, p).J(s.g)


@dataclass(frozen=True, eq=False)
class JState:
    """A mode state carrying an independently evolved F ≈ Jg."""

    state: ModeState
    F: np.ndarray

    @property
    def t(self) -> float:
        return self.state.t


def j_state(s: ModeState, p: ShearProfile) -> JState:
    return JState(state=s, F=apply_J(s, p))


def evolve_J_direct(
    sJ: JState,
    cfg: EvolveConfig,
    nu: float,
    p: ShearProfile,
    sinks: Optional[List[Callable[[JState], None]]] = None,
) -> JState:
    """
    Integrate the commutator-corrected equation for Jg alongside g, over T.

    Used to cross-check ``apply_J``; with ν = 0 or Couette flow the forcing
    vanishes and F is transported exactly like g.
    """
    sinks = list(sinks or [])
    s0 = sJ.state
    check_resolution(cfg, s0.grid, s0.k, nu, p)
    stepper = SplitStepper(s0.grid, s0.k, nu, p, cfg.dt, s0.model)
    n_steps = cfg.n_steps
    current = sJ
    _emit(sinks, current)
    for n in range(1, n_steps + 1):
        t = s0.t + n * cfg.dt
        g, F = stepper.advance_pair(current.state.g, current.F, current.t)
        state = current.state.evolved(g, t)
        try:
            check_guard(state, cfg.guard_tol)
        except HypomixError as exc:
            raise exc.with_context(t=t, step=n)
        current = replace(current, state=state, F=F)
        if n % cfg.sample_every == 0 or n == n_steps:
            _emit(sinks, current)
    return current
