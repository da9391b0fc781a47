"""
Explicit constants of the hypocoercivity estimates as functions of 𝔘, ν, k.

The constants are conservative on purpose and are exposed verbatim; empirical
rates are fitted separately in ``apps.experiments``.
"""
import logging
import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Dict

from apps.common.exceptions import ConfigurationError, ConstraintViolation

logger = logging.getLogger(__name__)

ALPHA_DENOMINATOR = 4 * 3504
NU0_DENOMINATOR = 4 * 7008
_LOG10_TINY = math.log10(sys.float_info.min)
# Identities of the constants hold exactly up to floating-point rounding.
EQUALITY_RTOL = 1e-12

UNRESTRICTED = 'unrestricted'
PHI_ONLY = 'phi_only'
BOTH = 'both'


@dataclass(frozen=True)
class ConstraintCheck:
    value: float
    bound: float
    relation: str
    holds: bool


@dataclass(frozen=True)
class CoeffLedger:
    frakU: float
    nu: float
    k: int
    alpha0: float
    beta0: float
    gamma0: float
    eps0: float
    delta0: float
    nu0: float
    log10_nu0: float
    nu0_underflow: bool
    C0sq: float
    alpha: float
    beta: float
    gamma: float
    constraints: Dict[str, ConstraintCheck] = field(default_factory=dict)

    @property
    def C0(self) -> float:
        return math.sqrt(self.C0sq)

    @property
    def decay_rate(self) -> float:
        """ε₀ν^{1/3}k^{2/3}, the exponential rate of the final estimate."""
        return self.eps0 * self.nu ** (1.0 / 3.0) * self.k ** (2.0 / 3.0)

    @property
    def transition_time(self) -> float:
        """T_{ν,k} = ν^{−1/3}k^{−2/3}."""
        if self.nu == 0:
            return math.inf
        return self.nu ** (-1.0 / 3.0) * self.k ** (-2.0 / 3.0)

    def as_dict(self):
        data = asdict(self)
        data['C0'] = self.C0
        data['decay_rate'] = self.decay_rate
        data['transition_time'] = None if math.isinf(self.transition_time) else self.transition_time
        if self.nu0_underflow:
            data['nu0'] = None
        return data


def _check(value, bound, relation):
    if relation == '<=':
        holds = value <= bound
    elif relation == '>=':
        holds = value >= bound
    else:
        holds = math.isclose(value, bound, rel_tol=EQUALITY_RTOL)
    return ConstraintCheck(value=value, bound=bound, relation=relation, holds=holds)


def base_constants(frakU: float) -> Dict[str, float]:
    """ν- and k-independent constants, with ν₀ evaluated in log space."""
    alpha0 = 1.0 / (ALPHA_DENOMINATOR * frakU ** 6)
    beta0 = 4.0 * alpha0 ** 2
    gamma0 = 128.0 * alpha0 ** 3
    delta0 = 1.0 / (ALPHA_DENOMINATOR * frakU ** 6)
    log10_nu0 = 1.5 * (math.log10(beta0) - math.log10(NU0_DENOMINATOR) - 8.0 * math.log10(frakU))
    underflow = log10_nu0 < _LOG10_TINY
    return {
        'alpha0': alpha0,
        'beta0': beta0,
        'gamma0': gamma0,
        'eps0': beta0 / (32.0 * frakU ** 2),
        'delta0': delta0,
        'log10_nu0': log10_nu0,
        'nu0_underflow': underflow,
        'nu0': 0.0 if underflow else 10.0 ** log10_nu0,
        'C0sq': 20.0 / (delta0 * gamma0),
    }


def build_ledger(frakU: float, nu: float, k: int) -> CoeffLedger:
    if not frakU >= 1:
        raise ConfigurationError('frakU must be >= 1.', frakU=frakU)
    if not nu >= 0:
        raise ConfigurationError('nu must be >= 0.', nu=nu)
    if int(k) != k or k < 1:
        raise ConfigurationError('k must be an integer >= 1.', k=k)
    k = int(k)
    nu = float(nu)
    frakU = float(frakU)

    c = base_constants(frakU)
    alpha = c['alpha0'] * nu ** (2.0 / 3.0) / k ** (2.0 / 3.0)
    beta = c['beta0'] * nu ** (1.0 / 3.0) / k ** (4.0 / 3.0)
    gamma = c['gamma0'] / k ** 2

    if nu > 0:
        ratio_cross = beta ** 2 / (alpha * gamma)
        ratio_alpha = alpha ** 2 / (beta * nu)
    else:
        ratio_cross = c['beta0'] ** 2 / (c['alpha0'] * c['gamma0'])
        ratio_alpha = c['alpha0'] ** 2 / c['beta0']

    constraints = {
        'cross_term': _check(ratio_cross, 0.25, '<='),
        'cross_term_identity': _check(ratio_cross, 0.125, '=='),
        'alpha_viscosity': _check(ratio_alpha, 0.5, '<='),
        'alpha_viscosity_identity': _check(ratio_alpha, 0.25, '=='),
        'gamma_beta_identity': _check(c['gamma0'] / c['beta0'], 32.0 * c['alpha0'], '=='),
        'gamma_beta': _check(c['gamma0'] / c['beta0'], 1.0 / (12.0 * frakU ** 2), '<='),
        'alpha_beta_product': _check(2.0 * frakU ** 2 / (c['alpha0'] * c['beta0']), 3.0, '>='),
        'gamma_inverse': _check(2.0 * frakU ** 2 / c['gamma0'], 3.0, '>='),
        'beta_alpha': _check(c['beta0'], c['alpha0'], '<='),
        'alpha_unit': _check(c['alpha0'], 1.0, '<='),
    }
    failed = [name for name, check in constraints.items() if not check.holds]
    if failed:
        raise ConstraintViolation(
            f"Ledger constraints failed: {', '.join(failed)}", frakU=frakU, nu=nu, k=k,
        )
    if c['nu0_underflow']:
        logger.warning(f'nu0 underflows double precision at frakU={frakU:g} (log10 nu0={c["log10_nu0"]:.1f})')

    return CoeffLedger(frakU=frakU, nu=nu, k=k, alpha=alpha, beta=beta, gamma=gamma, constraints=constraints, **c)


def check_nu_restriction(ledger: CoeffLedger, nu: float, k: int) -> str:
    """Which viscosity restriction of the estimates (ν/k ≤ ν₀, ν/k ≤ 1) holds."""
    ratio = nu / k
    if ratio <= 0 or math.log10(ratio) <= ledger.log10_nu0:
        return BOTH
    if ratio <= 1:
        return PHI_ONLY
    return UNRESTRICTED
