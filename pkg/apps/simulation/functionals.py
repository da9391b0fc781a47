"""
Norms and hypocoercivity functionals of a single mode.

x-derivatives act as ∂_x ↦ ik on the mode profile. Squared norms of the real
band differ from these per-mode values by one global factor 2, which cancels
in every inequality and ratio checked here.

Time derivatives of the functionals are evaluated from the balance identities
on the current state, never by differencing samples.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, NamedTuple, Optional

import numpy as np

from apps.ledger.coefficients import CoeffLedger, build_ledger
from apps.shears.catalog import ShearProfile, get_profile

from .evolve import Demodulation, apply_J, commutator_source
from .grid import FULL_LAPLACIAN, Grid, ModeState, diff1, hminus1_solve, laplacian_apply, norm_sq, trapezoid_inner

logger = logging.getLogger(__name__)

RECORD_FIELDS = ('t', 'l2', 'weighted', 'hminus1', 'h1', 'j_l2', 'j_weighted', 'phi', 'jj', 'lyap', 'batchelor')
RESIDUAL_NAMES = ('energy', 'gamma', 'energy_j', 'gamma_j')
J_FORCING_CONSTANT = 3504.0


class ShearOnGrid(NamedTuple):
    u: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    u3: np.ndarray


@lru_cache(maxsize=32)
def shear_on_grid(profile: ShearProfile, grid: Grid) -> ShearOnGrid:
    values = profile.evaluate(grid.y)
    for array in values.values():
        array.flags.writeable = False
    return ShearOnGrid(**values)


@dataclass(frozen=True)
class FunctionalRecord:
    t: float
    l2: float
    weighted: float
    hminus1: float
    h1: float
    j_l2: float
    j_weighted: float
    phi: float
    jj: float
    lyap: float
    batchelor: float
    balance_residuals: Dict[str, float] = field(default_factory=dict)
    # Quantities the monitors need that are not part of the CSV schema.
    extras: Dict[str, float] = field(default_factory=dict)

    def row(self):
        return [getattr(self, name) for name in RECORD_FIELDS] + [
            self.balance_residuals[name] for name in RESIDUAL_NAMES if name in self.balance_residuals
        ]


def _re(a, b, h: float) -> float:
    return float(np.real(trapezoid_inner(a, b, h)))


def cross_term(v, vy, k: int, u1, h: float) -> float:
    """X = Re⟨ik u′ v, ∂_y v⟩."""
    return _re(1j * k * u1 * v, vy, h)


def quadratic_form(v, vy, k: int, u1, led: CoeffLedger, h: float) -> float:
    """½[‖v‖² + α‖∂_y v‖² + 2βX + γk²‖u′v‖²]."""
    return 0.5 * (
        norm_sq(v, h)
        + led.alpha * norm_sq(vy, h)
        + 2.0 * led.beta * cross_term(v, vy, k, u1, h)
        + led.gamma * k * k * norm_sq(u1 * v, h)
    )


def coercivity_bounds(v, vy, k: int, u1, led: CoeffLedger, h: float):
    """Lower and upper quadratic bounds sandwiching the functional."""
    a = 2.0 * norm_sq(v, h)
    b = led.alpha * norm_sq(vy, h)
    c = led.gamma * k * k * norm_sq(u1 * v, h)
    return 0.25 * (a + b + c), 0.25 * (a + 3.0 * b + 3.0 * c)


def weighted_norm(s: ModeState, p: ShearProfile) -> float:
    """‖g‖_{u′} = √(‖g‖² + ‖u′g‖²)."""
    u1 = shear_on_grid(p, s.grid).u1
    h = s.grid.h
    return math.sqrt(norm_sq(s.g, h) + norm_sq(u1 * s.g, h))


def transport_frame(s: ModeState, p: ShearProfile) -> Demodulation:
    sh = shear_on_grid(p, s.grid)
    return Demodulation(s.k * s.t, sh.u, sh.u1, sh.u2, s.grid.h)


def phi(s: ModeState, p: ShearProfile, led: CoeffLedger) -> float:
    u1 = shear_on_grid(p, s.grid).u1
    dm = transport_frame(s, p)
    return quadratic_form(s.g, dm.d1(s.g), s.k, u1, led, s.grid.h)


def jfunc(s: ModeState, p: ShearProfile, led: CoeffLedger) -> float:
    u1 = shear_on_grid(p, s.grid).u1
    dm = transport_frame(s, p)
    F = dm.J(s.g)
    return quadratic_form(F, dm.d1(F), s.k, u1, led, s.grid.h)


def generator(s: ModeState, p: ShearProfile, nu: float) -> np.ndarray:
    """The semi-discrete right-hand side ∂_t g of the scheme being integrated."""
    sh = shear_on_grid(p, s.grid)
    out = -1j * s.k * sh.u * s.g + nu * laplacian_apply(s.g, s.grid.h)
    if s.model == FULL_LAPLACIAN:
        out = out - nu * s.k * s.k * s.g
    return out


def quadratic_rate(v, vy, vyy, k: int, sh: ShearOnGrid, led: CoeffLedger, nu: float, model: str, h: float) -> float:
    """d/dt of the quadratic form along the per-mode equation, from the balance identities."""
    u1, u2, u3 = sh.u1, sh.u2, sh.u3
    k2 = k * k
    rate = (
        -nu * norm_sq(vy, h)
        - nu * led.alpha * norm_sq(vyy, h)
        - led.beta * k2 * norm_sq(u1 * v, h)
        - nu * led.gamma * k2 * norm_sq(u1 * vy, h)
        - led.alpha * cross_term(v, vy, k, u1, h)
        - 2.0 * nu * led.beta * _re(1j * k * u1 * vy, vyy, h)
        - nu * led.beta * _re(1j * k * u2 * v, vyy, h)
        + nu * led.gamma * k2 * _re((u2 * u2 + u1 * u3) * v, v, h)
    )
    if model == FULL_LAPLACIAN:
        rate -= 2.0 * nu * k2 * quadratic_form(v, vy, k, u1, led, h)
    return rate


def dissipation(vy, vyy, k: int, u1, led: CoeffLedger, nu: float, h: float) -> float:
    """ν/4‖∂_y v‖² + να/2‖∂_yy v‖² + νγ/2·k²‖u′∂_y v‖²."""
    return nu * (
        0.25 * norm_sq(vy, h)
        + 0.5 * led.alpha * norm_sq(vyy, h)
        + 0.5 * led.gamma * k * k * norm_sq(u1 * vy, h)
    )


def _source_rate(F, Fy, S, k: int, u1, led: CoeffLedger, dm: Demodulation) -> float:
    h = dm.h
    Sy = dm.d1(S)
    return (
        _re(F, S, h)
        + led.alpha * _re(Fy, Sy, h)
        + led.beta * (_re(1j * k * u1 * S, Fy, h) + _re(1j * k * u1 * F, Sy, h))
        + led.gamma * k * k * _re(u1 * F, u1 * S, h)
    )


def balance_residuals(s: ModeState, p: ShearProfile, nu: float, dm: Optional[Demodulation] = None) -> Dict[str, float]:
    """
    Chain-rule derivative minus balance identity, for ½‖g‖², ½k²‖u′g‖² and
    the same two quantities of Jg.
    """
    h = s.grid.h
    k = s.k
    k2 = k * k
    sh = shear_on_grid(p, s.grid)
    full = s.model == FULL_LAPLACIAN
    dm = dm or transport_frame(s, p)
    g = s.g
    gy = dm.d1(g)
    rhs = generator(s, p, nu)
    F = dm.J(g)
    Fy = dm.d1(F)
    # Exact time derivative of F = e^{−iktu}D(e^{iktu}g) along the generator.
    transport = 1j * k * sh.u
    Fdot = dm.J(rhs + transport * g) - transport * F

    energy = _re(g, rhs, h) + nu * norm_sq(gy, h)
    gamma = k2 * (
        _re(sh.u1 * g, sh.u1 * rhs, h)
        + nu * norm_sq(sh.u1 * gy, h)
        - nu * _re((sh.u2 ** 2 + sh.u1 * sh.u3) * g, g, h)
    )
    energy_j = _re(F, Fdot, h) + nu * norm_sq(Fy, h)
    gamma_j = k2 * (_re(sh.u1 * F, sh.u1 * Fdot, h) + nu * norm_sq(sh.u1 * Fy, h))
    if nu > 0 and (np.any(sh.u2) or np.any(sh.u3)):
        defect = F - gy
        r2 = sh.u2 / sh.u1
        r3 = sh.u3 / sh.u1
        weight = 4.0 * sh.u2 ** 2 + sh.u1 * sh.u3
        e0 = _re(r3 * defect, F, h) + 2.0 * _re(r2 * defect, Fy, h)
        e3 = k2 * (_re(weight * F, F, h) - _re(weight * gy, F, h) - 2.0 * _re(sh.u2 * gy, sh.u1 * Fy, h))
        energy_j -= nu * e0
        gamma_j -= nu * e3
    if full:
        energy += nu * k2 * norm_sq(g, h)
        gamma += nu * k2 * k2 * norm_sq(sh.u1 * g, h)
        energy_j += nu * k2 * norm_sq(F, h)
        gamma_j += nu * k2 * k2 * norm_sq(sh.u1 * F, h)
    return {'energy': energy, 'gamma': gamma, 'energy_j': energy_j, 'gamma_j': gamma_j}


def record(s: ModeState, p: ShearProfile, led: CoeffLedger) -> FunctionalRecord:
    """Every norm, functional and balance residual of the state in one pass."""
    h = s.grid.h
    k = s.k
    nu = led.nu
    sh = shear_on_grid(p, s.grid)
    dm = transport_frame(s, p)
    g = s.g
    gy = dm.d1(g)
    gyy = dm.d2(g)
    F = dm.J(g)
    Fy = dm.d1(F)
    Fyy = dm.d2(F)

    l2sq = norm_sq(g, h)
    u_sq = norm_sq(sh.u1 * g, h)
    j_sq = norm_sq(F, h)
    uj_sq = norm_sq(sh.u1 * F, h)
    _, hm_sq = hminus1_solve(s)

    phi_value = quadratic_form(g, gy, k, sh.u1, led, h)
    jj_value = quadratic_form(F, Fy, k, sh.u1, led, h)
    jj_rate = quadratic_rate(F, Fy, Fyy, k, sh, led, nu, s.model, h)
    if nu > 0:
        S = commutator_source(g, F, sh.u1, sh.u2, sh.u3, dm, nu)
        jj_rate += _source_rate(F, Fy, S, k, sh.u1, led, dm)

    l2 = math.sqrt(l2sq)
    hminus1 = math.sqrt(hm_sq)
    gy_sq = norm_sq(gy, h)
    extras = {
        'phi_rate': quadratic_rate(g, gy, gyy, k, sh, led, nu, s.model, h),
        'phi_dissipation': dissipation(gy, gyy, k, sh.u1, led, nu, h),
        'jj_rate': jj_rate,
        'jj_forcing': J_FORCING_CONSTANT * nu * led.frakU ** 6 * (
            gy_sq + led.alpha * norm_sq(gyy, h) + led.gamma * k * k * norm_sq(sh.u1 * gy, h)
        ),
        'u_sq': u_sq,
        'uj_sq': uj_sq,
    }
    return FunctionalRecord(
        t=s.t,
        l2=l2,
        weighted=math.sqrt(l2sq + u_sq),
        hminus1=hminus1,
        h1=math.sqrt(k * k * l2sq + gy_sq),
        j_l2=math.sqrt(j_sq),
        j_weighted=math.sqrt(j_sq + uj_sq),
        phi=phi_value,
        jj=jj_value,
        lyap=phi_value + led.delta0 * jj_value,
        batchelor=hminus1 / l2 if l2 > 0 else 0.0,
        balance_residuals=balance_residuals(s, p, nu, dm),
        extras=extras,
    )


def lemma_gap(s: ModeState, p: ShearProfile, led: CoeffLedger) -> float:
    """2𝔘²(‖g‖ + ‖Jg‖) − kt‖g‖_{Ḣ^{-1}}; non-negative whenever (H) holds."""
    h = s.grid.h
    _, hm_sq = hminus1_solve(s)
    l2 = math.sqrt(norm_sq(s.g, h))
    j_l2 = math.sqrt(norm_sq(apply_J(s, p), h))
    return 2.0 * led.frakU ** 2 * (l2 + j_l2) - s.k * s.t * math.sqrt(hm_sq)


@dataclass(frozen=True)
class CoercivityReport:
    n_states: int
    worst_lower: float
    worst_upper: float
    worst_lower_j: float
    worst_upper_j: float
    tol: float

    @property
    def passed(self) -> bool:
        return min(self.worst_lower, self.worst_upper, self.worst_lower_j, self.worst_upper_j) >= -self.tol


def coercivity_suite(
    grid: Grid, profile: ShearProfile, led: CoeffLedger, n_states: int = 1000, seed: int = 0, tol: float = 1e-12,
) -> CoercivityReport:
    """
    Check both functional sandwiches on random complex states.

    Margins are normalised by the upper bound; the check is a quadratic-form
    inequality, so it must hold for arbitrary vectors.
    """
    rng = np.random.default_rng(seed)
    h = grid.h
    u1 = shear_on_grid(profile, grid).u1
    worst = [math.inf] * 4
    for _ in range(n_states):
        g = rng.standard_normal(grid.N) + 1j * rng.standard_normal(grid.N)
        g[0] = g[-1] = 0.0
        state = ModeState(k=led.k, t=float(rng.uniform(0.0, 10.0)), g=g, grid=grid)
        for offset, v in ((0, g), (2, apply_J(state, profile))):
            vy = diff1(v, h)
            value = quadratic_form(v, vy, led.k, u1, led, h)
            lower, upper = coercivity_bounds(v, vy, led.k, u1, led, h)
            worst[offset] = min(worst[offset], (value - lower) / upper)
            worst[offset + 1] = min(worst[offset + 1], (upper - value) / upper)
    report = CoercivityReport(n_states, worst[0], worst[1], worst[2], worst[3], tol)
    logger.info(f'Coercivity suite on {profile.name}: {n_states} states, passed={report.passed}')
    return report


def cross_term_sign_check(N: int = 257) -> float:
    """
    Transport derivative of X over −k²‖u′g‖² on a modulated Gaussian.

    Close to 1 when the cross-term convention matches the transport sign;
    close to −1 when it is flipped.
    """
    grid = Grid(8.0, N)
    profile = get_profile('couette')
    led = build_ledger(1.0, 0.0, 1)
    sh = shear_on_grid(profile, grid)
    h = grid.h
    k = led.k
    g = np.exp(-grid.y ** 2 + 2j * grid.y)
    gdot = -1j * k * sh.u * g
    rate = _re(1j * k * sh.u1 * gdot, diff1(g, h), h) + _re(1j * k * sh.u1 * g, diff1(gdot, h), h)
    return rate / (-k * k * norm_sq(sh.u1 * g, h))
