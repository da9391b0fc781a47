"""
Certification of hypothesis (H) on a truncated domain by dense sampling.

(H): 1/𝔘 ≤ u′, |u″|/u′ ≤ 𝔘, |u‴|/u′ ≤ 𝔘.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from django.conf import settings

from apps.common.exceptions import ConfigurationError, NonMonotone

from .catalog import ShearProfile

logger = logging.getLogger(__name__)

MIN_SAMPLES = 1000
CONSTRAINTS = ('inverse_slope', 'curvature', 'third_derivative')


@dataclass(frozen=True)
class HypothesisCertificate:
    profile: str
    frakU: float
    domain: Tuple[float, float]
    satisfied: bool
    n_samples: int
    # (y, constraint, frakU - value) at the worst sample of each constraint
    worst_points: List[Tuple[float, str, float]] = field(default_factory=list)
    global_h: bool = True

    def as_dict(self):
        return {
            'profile': self.profile,
            'frakU': self.frakU,
            'domain': list(self.domain),
            'satisfied': self.satisfied,
            'n_samples': self.n_samples,
            'global_h': self.global_h,
            'worst_points': [
                {'y': y, 'constraint': name, 'margin': margin} for y, name, margin in self.worst_points
            ],
        }


def sample_points(L: float, n_samples: Optional[int] = None, density: Optional[float] = None) -> np.ndarray:
    """
    Sample nodes on [−L, L].

    Without ``n_samples`` the nodes form a lattice anchored at 0, so the set
    for a smaller L is a subset of the set for a larger one.
    """
    if n_samples is not None:
        if n_samples < MIN_SAMPLES:
            raise ConfigurationError(f'n_samples must be >= {MIN_SAMPLES}.', n_samples=n_samples)
        return np.linspace(-L, L, int(n_samples))
    if density is None:
        density = settings.HYPOMIX['CERTIFY_DENSITY']
    spacing = 1.0 / float(density)
    m = int(np.floor(L / spacing * (1.0 + 1e-12)))
    if 2 * m + 1 < MIN_SAMPLES:
        return np.linspace(-L, L, MIN_SAMPLES + 1)
    return spacing * np.arange(-m, m + 1, dtype=float)


def certify_hypothesis(
    profile: ShearProfile,
    L: float,
    n_samples: Optional[int] = None,
    density: Optional[float] = None,
) -> HypothesisCertificate:
    """Compute the smallest 𝔘 ≥ 1 for which (H) holds on the sampled domain."""
    if not L > 0:
        raise ConfigurationError('Domain half-width L must be positive.', L=L)

    y = sample_points(L, n_samples, density)
    d = profile.evaluate(y)
    u1 = d['u1']
    if np.any(u1 <= 0):
        bad = int(np.argmin(u1))
        raise NonMonotone(
            f"Profile '{profile.name}' has u' <= 0 on [-{L}, {L}].",
            profile=profile.name, y=float(y[bad]), u1=float(u1[bad]),
        )

    values = {
        'inverse_slope': 1.0 / u1,
        'curvature': np.abs(d['u2']) / u1,
        'third_derivative': np.abs(d['u3']) / u1,
    }
    frakU = max(1.0, *(float(v.max()) for v in values.values()))
    worst = []
    for name in CONSTRAINTS:
        i = int(np.argmax(values[name]))
        worst.append((float(y[i]), name, frakU - float(values[name][i])))

    logger.info(f"Certified '{profile.name}' on [-{L}, {L}] with {y.size} samples: frakU={frakU:.6g}")
    return HypothesisCertificate(
        profile=profile.name,
        frakU=frakU,
        domain=(-float(L), float(L)),
        satisfied=True,
        n_samples=int(y.size),
        worst_points=worst,
        global_h=profile.global_h,
    )
