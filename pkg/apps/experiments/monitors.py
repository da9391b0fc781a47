"""
Inequality monitors over sampled trajectories.

Every monitor is a pure fold over the records: it computes a signed margin
per sample (bound minus value, so negative means violated) and reports the
worst one. A monitor whose viscosity restriction is not met still reports its
margin, flagged as advisory.
"""
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np

from apps.common.exceptions import ConfigurationError, RestrictionUnmet
from apps.ledger.coefficients import BOTH

from .trajectory import Trajectory

logger = logging.getLogger(__name__)

LEMMA_TOL = 1e-8
# Relative band for bounds that are attained with equality in the inviscid
# limit, where the discrete norms only conserve to discretisation accuracy.
DISCRETE_TOL = 1e-4
FUNCTIONAL_TOL = 1e-6


@dataclass(frozen=True)
class MonitorReport:
    name: str
    trajectory_id: str
    samples_checked: int
    worst_margin: float
    tol: float
    passed: bool
    advisory: bool = False
    regime: Optional[str] = None
    worst_t: Optional[float] = None
    details: Dict[str, float] = field(default_factory=dict)

    def as_dict(self):
        data = asdict(self)
        data['pass'] = data.pop('passed')
        return data


def _report(
    name: str,
    traj: Trajectory,
    times,
    margins,
    tol: float,
    advisory: bool = False,
    details: Optional[Dict[str, float]] = None,
) -> MonitorReport:
    margins = np.asarray(margins, dtype=float)
    if margins.size:
        i = int(np.argmin(margins))
        worst, worst_t = float(margins[i]), float(times[i])
    else:
        worst, worst_t = math.inf, None
    passed = bool(worst >= -tol)
    report = MonitorReport(
        name=name,
        trajectory_id=traj.trajectory_id,
        samples_checked=int(margins.size),
        worst_margin=worst,
        tol=tol,
        passed=passed,
        advisory=advisory,
        regime=traj.regime,
        worst_t=worst_t,
        details=details or {},
    )
    level = logging.INFO if passed else logging.WARNING
    logger.log(level, f'{name} on {traj.trajectory_id}: worst margin {worst:.3e} (tol {tol:.1e}), passed={passed}')
    return report


def _relative(bound, value):
    bound = np.asarray(bound, dtype=float)
    value = np.asarray(value, dtype=float)
    scale = np.where(bound > 0, bound, 1.0)
    return (bound - value) / scale


def monitor_phi_ode(traj: Trajectory, tol: Optional[float] = None, strict: bool = False) -> MonitorReport:
    """dΦ/dt + 2·rate·Φ + dissipation ≤ 0 at every sample."""
    led = traj.ledger
    advisory = traj.nu / traj.k > 1
    if advisory:
        exc = RestrictionUnmet('Φ estimate assumes nu/k <= 1.', nu=traj.nu, k=traj.k)
        if strict:
            raise exc
        logger.warning(f'{traj.trajectory_id}: {exc.message} Reporting the empirical margin only.')
    if tol is None:
        tol = FUNCTIONAL_TOL * traj.initial.phi
    rate = 2.0 * led.decay_rate
    margins = [
        -(r.extras['phi_rate'] + rate * r.phi + r.extras['phi_dissipation']) for r in traj.records
    ]
    return _report('phi_ode', traj, traj.times, margins, tol, advisory)


def monitor_lyapunov(traj: Trajectory, tol: Optional[float] = None) -> MonitorReport:
    """e^{2·rate·t}(Φ + δ₀𝒥) is non-increasing between consecutive samples."""
    if tol is None:
        tol = FUNCTIONAL_TOL * traj.initial.lyap
    t = traj.times
    scaled = np.exp(2.0 * traj.ledger.decay_rate * t) * traj.series('lyap')
    margins = scaled[:-1] - scaled[1:]
    return _report('lyapunov', traj, t[1:], margins, tol, advisory=traj.regime != BOTH)


def monitor_final_bound(traj: Trajectory, tol: float = LEMMA_TOL) -> MonitorReport:
    """
    The decay estimates with the ledger constants: weighted energy of g and
    Jg, the mixing bound on the Ḣ^{-1} norm, and per-mode enhanced diffusion.
    Margins are relative to each bound.
    """
    led = traj.ledger
    first = traj.initial
    t = traj.times
    decay = np.exp(-led.decay_rate * t)
    weighted = traj.series('weighted')
    j_weighted = traj.series('j_weighted')

    energy = _relative(
        led.C0sq * decay ** 2 * (first.weighted ** 2 + first.j_weighted ** 2),
        weighted ** 2 + j_weighted ** 2,
    )
    mixing = _relative(
        led.C0 * decay / np.sqrt(1.0 + (traj.k * t) ** 2) * (first.weighted + first.j_weighted),
        traj.series('hminus1'),
    )
    enhanced = _relative(led.C0 * decay * first.weighted, weighted)
    margins = np.minimum(np.minimum(energy, mixing), enhanced)
    details = {
        'energy': float(energy.min()),
        'mixing': float(mixing.min()),
        'enhanced_diffusion': float(enhanced.min()),
    }
    return _report('final_bound', traj, t, margins, tol, advisory=traj.regime != BOTH, details=details)


def monitor_j_ode(traj: Trajectory, tol: Optional[float] = None) -> MonitorReport:
    """d𝒥/dt + 2·rate·𝒥 ≤ 3504ν𝔘⁶[‖∂_y g‖² + α‖∂_yy g‖² + γk²‖u′∂_y g‖²]."""
    if tol is None:
        tol = FUNCTIONAL_TOL * traj.initial.jj
    rate = 2.0 * traj.ledger.decay_rate
    margins = [
        r.extras['jj_forcing'] - r.extras['jj_rate'] - rate * r.jj for r in traj.records
    ]
    return _report('j_ode', traj, traj.times, margins, tol, advisory=traj.regime != BOTH)


def monitor_gronwall(traj: Trajectory, tol: float = DISCRETE_TOL) -> MonitorReport:
    """‖u′g‖² + δ₀‖u′Jg‖² ≤ e^{7𝔘²νt}[‖u′g⁰‖² + δ₀‖u′∂_y g⁰‖²]."""
    led = traj.ledger
    first = traj.initial
    t = traj.times
    start = first.extras['u_sq'] + led.delta0 * first.extras['uj_sq']
    value = np.array([r.extras['u_sq'] + led.delta0 * r.extras['uj_sq'] for r in traj.records])
    bound = np.exp(7.0 * led.frakU ** 2 * traj.nu * t) * start
    return _report('gronwall', traj, t, _relative(bound, value), tol)


def monitor_lemma(traj: Trajectory, tol: float = LEMMA_TOL) -> MonitorReport:
    """kt‖g‖_{Ḣ^{-1}} ≤ 2𝔘²(‖g‖ + ‖Jg‖) at every sample with t > 0."""
    t = traj.times
    keep = t > 0
    scale = traj.series('l2') + traj.series('j_l2')
    scale = np.where(scale > 0, scale, 1.0)
    margins = traj.lemma_gaps()[keep] / scale[keep]
    return _report('lemma', traj, t[keep], margins, tol)


def monitor_inviscid_mixing(traj: Trajectory, tol: float = DISCRETE_TOL) -> MonitorReport:
    """For ν = 0: (kt)²‖g‖²_{Ḣ^{-1}} ≤ 4𝔘⁴[‖g⁰‖² + ‖∂_y g⁰‖²]."""
    first = traj.initial
    t = traj.times
    bound = 4.0 * traj.ledger.frakU ** 4 * (first.l2 ** 2 + first.j_l2 ** 2)
    value = (traj.k * t * traj.series('hminus1')) ** 2
    return _report('inviscid_mixing', traj, t, _relative(bound, value), tol, advisory=traj.nu > 0)


def monitor_couette_mixing(traj: Trajectory, tol: float = DISCRETE_TOL) -> MonitorReport:
    """Couette only: ‖g‖_{Ḣ^{-1}}·√(1 + (kt)²) ≤ 2e^{−νk²t³/12}·‖g⁰‖_{H¹}."""
    if traj.profile.name != 'couette':
        raise ConfigurationError('couette_mixing applies to the couette profile only.', profile=traj.profile.name)
    k = traj.k
    t = traj.times
    bound = 2.0 * np.exp(-traj.nu * k * k * t ** 3 / 12.0) * traj.initial.h1
    value = traj.series('hminus1') * np.sqrt(1.0 + (k * t) ** 2)
    return _report('couette_mixing', traj, t, _relative(bound, value), tol)


MONITORS: Dict[str, Callable[[Trajectory], MonitorReport]] = {
    'phi_ode': monitor_phi_ode,
    'lyapunov': monitor_lyapunov,
    'final_bound': monitor_final_bound,
    'j_ode': monitor_j_ode,
    'gronwall': monitor_gronwall,
    'lemma': monitor_lemma,
    'inviscid_mixing': monitor_inviscid_mixing,
    'couette_mixing': monitor_couette_mixing,
}


def applicable_monitors(traj: Trajectory) -> List[str]:
    names = ['phi_ode', 'lyapunov', 'final_bound', 'j_ode', 'gronwall', 'lemma']
    if traj.nu == 0:
        names.append('inviscid_mixing')
    if traj.profile.name == 'couette':
        names.append('couette_mixing')
    return names


def run_monitors(traj: Trajectory, names: Optional[Iterable[str]] = None) -> List[MonitorReport]:
    names = list(names) if names else applicable_monitors(traj)
    unknown = [name for name in names if name not in MONITORS]
    if unknown:
        raise ConfigurationError(f"Unknown monitors: {', '.join(unknown)}", monitors=unknown)
    return [MONITORS[name](traj) for name in names]

