"""
Registry of monotone shear profiles with closed-form derivatives.

Profiles are code-registered builders; run configs refer to them by name plus
a flat parameter map.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List

import numpy as np
from scipy import special

from apps.common.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

Array = np.ndarray
ShearFunction = Callable[[Array], Array]


@dataclass(frozen=True, eq=False)
class ShearProfile:
    """A C³ shear u with analytic u′, u″, u‴."""

    name: str
    u: ShearFunction
    u1: ShearFunction
    u2: ShearFunction
    u3: ShearFunction
    params: Dict[str, float] = field(default_factory=dict)
    # False when (H) cannot hold on all of ℝ (the constant grows with the domain).
    global_h: bool = True

    def evaluate(self, y) -> Dict[str, Array]:
        y = np.asarray(y, dtype=float)
        return {'u': self.u(y), 'u1': self.u1(y), 'u2': self.u2(y), 'u3': self.u3(y)}

    def describe(self) -> Dict[str, object]:
        return {'name': self.name, 'params': dict(self.params), 'global_h': self.global_h}


_REGISTRY: Dict[str, Callable[..., ShearProfile]] = {}


def register(name: str):
    def decorator(builder):
        _REGISTRY[name] = builder
        return builder
    return decorator


def available() -> List[str]:
    return sorted(_REGISTRY)


def get_profile(name: str, **params) -> ShearProfile:
    """Build a registered profile, rejecting unknown names and parameters."""
    try:
        builder = _REGISTRY[name]
    except KeyError:
        raise ConfigurationError(
            f"Unknown shear profile '{name}'.", profile=name, available=','.join(available())
        ) from None
    try:
        return builder(**params)
    except TypeError as exc:
        raise ConfigurationError(f"Bad parameters for profile '{name}': {exc}", profile=name) from exc


def _zeros(y):
    return np.zeros_like(np.asarray(y, dtype=float))


def _ones(y):
    return np.ones_like(np.asarray(y, dtype=float))


@register('couette')
def couette() -> ShearProfile:
    return ShearProfile(
        name='couette',
        u=lambda y: np.asarray(y, dtype=float).copy(),
        u1=_ones,
        u2=_zeros,
        u3=_zeros,
    )


@register('sine_perturbed')
def sine_perturbed(amplitude: float = 0.5) -> ShearProfile:
    """u(y) = y + a sin y; monotone for |a| < 1."""
    a = float(amplitude)
    if not abs(a) < 1.0:
        raise ConfigurationError('sine_perturbed needs |amplitude| < 1.', amplitude=a)
    return ShearProfile(
        name='sine_perturbed',
        u=lambda y: y + a * np.sin(y),
        u1=lambda y: 1.0 + a * np.cos(y),
        u2=lambda y: -a * np.sin(y),
        u3=lambda y: -a * np.cos(y),
        params={'amplitude': a},
    )


@register('exponential')
def exponential() -> ShearProfile:
    return ShearProfile(
        name='exponential',
        u=lambda y: y + np.exp(y),
        u1=lambda y: 1.0 + np.exp(y),
        u2=lambda y: np.exp(y),
        u3=lambda y: np.exp(y),
    )


@register('polynomial')
def polynomial(degree: int = 3) -> ShearProfile:
    """u(y) = y + yⁿ for odd n ≥ 3 (n = 3 gives y(1 + y²))."""
    n = int(degree)
    if n < 3 or n % 2 == 0 or n != degree:
        raise ConfigurationError('polynomial degree must be an odd integer >= 3.', degree=degree)
    return ShearProfile(
        name='polynomial',
        u=lambda y: y + y ** n,
        u1=lambda y: 1.0 + n * y ** (n - 1),
        u2=lambda y: n * (n - 1) * y ** (n - 2),
        u3=lambda y: n * (n - 1) * (n - 2) * y ** (n - 3) * _ones(y),
        params={'degree': n},
    )


_FRESNEL_SCALE = np.sqrt(np.pi / 2.0)


def fresnel_sine_integral(y):
    """∫₀^y sin(z²) dz through the normalised Fresnel integral."""
    y = np.asarray(y, dtype=float)
    s, _ = special.fresnel(y / _FRESNEL_SCALE)
    return _FRESNEL_SCALE * s


@register('oscillatory')
def oscillatory() -> ShearProfile:
    """u(y) = y + ½∫₀^y sin z² dz: monotone, but |u″|/u′ is unbounded on ℝ."""
    return ShearProfile(
        name='oscillatory',
        u=lambda y: y + 0.5 * fresnel_sine_integral(y),
        u1=lambda y: 1.0 + 0.5 * np.sin(y ** 2),
        u2=lambda y: y * np.cos(y ** 2),
        u3=lambda y: np.cos(y ** 2) - 2.0 * y ** 2 * np.sin(y ** 2),
        global_h=False,
    )


def constant(value: float = 1.0) -> ShearProfile:
    """Degenerate u ≡ value. Not monotone; only for solver tests."""
    c = float(value)
    return ShearProfile(
        name='constant',
        u=lambda y: np.full_like(np.asarray(y, dtype=float), c),
        u1=_zeros,
        u2=_zeros,
        u3=_zeros,
        params={'value': c},
    )


def catalog() -> List[ShearProfile]:
    """Default instance of every registered profile."""
    return [_REGISTRY[name]() for name in available()]
