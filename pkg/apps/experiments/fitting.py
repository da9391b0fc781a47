"""Least-squares decay-rate fits on sampled series."""
import logging
import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import signal, stats

from apps.common.exceptions import ConfigurationError, InsufficientDecay

from .trajectory import Trajectory

logger = logging.getLogger(__name__)

EXPONENTIAL = 'exponential'
POWER_LAW = 'power_law'
MIN_FIT_POINTS = 10
MIXING_WINDOW = (10.0, 100.0)
# Ḣ^{-1} must drop below this fraction of its value at the window start.
DECAY_FLOOR = 0.9


@dataclass(frozen=True)
class RateFit:
    kind: str
    window: Tuple[float, float]
    exponent: float
    r_squared: float
    n_points: int
    intercept: float = 0.0
    envelope: bool = False
    # Rate predicted by the ledger, for comparison with the measured one.
    reference: Optional[float] = None

    def __post_init__(self):
        if self.kind not in (EXPONENTIAL, POWER_LAW):
            raise ConfigurationError(f"Unknown fit kind '{self.kind}'.", kind=self.kind)

    def as_dict(self):
        data = asdict(self)
        data['window'] = list(self.window)
        return data


def least_squares(x, y, kind: str, window, min_points: int = MIN_FIT_POINTS, **extra) -> RateFit:
    """Straight-line fit of y against x; both already transformed."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < min_points:
        raise ConfigurationError(
            f'Need at least {min_points} points for a fit.', n_points=int(x.size), window=list(window),
        )
    result = stats.linregress(x, y)
    r_squared = float(min(max(result.rvalue ** 2, 0.0), 1.0))
    return RateFit(
        kind=kind,
        window=(float(window[0]), float(window[1])),
        exponent=float(result.slope),
        r_squared=r_squared,
        n_points=int(x.size),
        intercept=float(result.intercept),
        **extra,
    )


def upper_envelope(values: np.ndarray) -> np.ndarray:
    """Indices of the local maxima of a sampled series."""
    peaks, _ = signal.find_peaks(values)
    return peaks


def _window(t: np.ndarray, window: Sequence[float]) -> np.ndarray:
    t1, t2 = window
    if not t2 > t1:
        raise ConfigurationError('Fit window must satisfy t1 < t2.', window=list(window))
    return np.nonzero((t >= t1) & (t <= t2))[0]


def fit_mixing_rate(traj: Trajectory, window: Sequence[float] = MIXING_WINDOW) -> RateFit:
    """
    Power-law exponent of the inviscid Ḣ^{-1} decay.

    The fit uses the local maxima of the series inside the window; if there
    are too few of them (monotone decay) all samples in the window are used.
    """
    if traj.nu != 0:
        raise ConfigurationError('Mixing-rate fits need an inviscid run.', nu=traj.nu)
    if window[0] < MIXING_WINDOW[0]:
        raise ConfigurationError(f'Fit window must start at t >= {MIXING_WINDOW[0]:g}.', window=list(window))
    t = traj.times
    hminus1 = traj.series('hminus1')
    idx = _window(t, window)
    if idx.size < 2:
        raise ConfigurationError('Fit window holds fewer than two samples.', window=list(window))
    if hminus1[idx[-1]] > DECAY_FLOOR * hminus1[idx[0]]:
        raise InsufficientDecay(
            ratio=float(hminus1[idx[-1]] / hminus1[idx[0]]), window=list(window),
            trajectory=traj.trajectory_id,
        )

    peaks = idx[0] + upper_envelope(hminus1[idx])
    envelope = peaks.size >= MIN_FIT_POINTS
    if not envelope:
        logger.warning(
            f'{traj.trajectory_id}: {peaks.size} local maxima in window, fitting all {idx.size} samples'
        )
        peaks = idx
    fit = least_squares(np.log(t[peaks]), np.log(hminus1[peaks]), POWER_LAW, window, envelope=envelope)
    logger.info(f'{traj.trajectory_id}: mixing exponent {fit.exponent:.4f} (r2={fit.r_squared:.4f})')
    return fit


def fit_decay_rate(traj: Trajectory, window: Optional[Sequence[float]] = None) -> RateFit:
    """
    Exponential rate of the weighted norm, log ‖g‖_{u′} against t.

    ``exponent`` is the fitted slope (negative for decay); ``reference`` is the
    ledger rate ε₀ν^{1/3}k^{2/3}.
    """
    t = traj.times
    if window is None:
        window = (float(t[0]), float(t[-1]))
    idx = _window(t, window)
    weighted = traj.series('weighted')[idx]
    if np.any(weighted <= 0):
        raise InsufficientDecay('Weighted norm vanished inside the window.', trajectory=traj.trajectory_id)
    return least_squares(t[idx], np.log(weighted), EXPONENTIAL, window, reference=-traj.ledger.decay_rate)


def fit_power_law(x, y, window=None, min_points: int = 2) -> RateFit:
    """log y against log x, for parameter sweeps."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if window is None:
        window = (float(x.min()), float(x.max()))
    if np.any(x <= 0) or np.any(y <= 0) or not np.all(np.isfinite(y)):
        raise ConfigurationError('Power-law fit needs positive finite data.')
    return least_squares(np.log(x), np.log(y), POWER_LAW, window, min_points=min_points)


def tau_closed_form(nu: float, threshold: float, k: int = 1) -> float:
    """
    Upper bound on the Couette decay time, from ‖g(t)‖ ≤ e^{−νk²t³/12}‖g⁰‖.

    Data concentrated at low frequency decays like e^{−νk²t³/3}, so the
    measured τ sits well below this value with the same ν^{−1/3} scaling.
    """
    return (12.0 * math.log(1.0 / threshold) / (nu * k * k)) ** (1.0 / 3.0)
