"""Compactly supported initial data for a single mode."""
from dataclasses import dataclass

import numpy as np

from apps.common.exceptions import ConfigurationError

from .grid import HYPOELLIPTIC, Grid, ModeState

GAUSSIAN = 'gaussian_bump'
HERMITE = 'hermite_bump'
KINDS = (GAUSSIAN, HERMITE)

# Effective support is [y₀ − 8σ, y₀ + 8σ]; it must sit inside this fraction of [−L, L].
SUPPORT_WIDTHS = 8.0
# The default unit-width bump on L = 12 reaches ±8 = 2L/3, so L/2 would reject it.
SUPPORT_FRACTION = 2.0 / 3.0


@dataclass(frozen=True)
class InitialData:
    kind: str = GAUSSIAN
    center: float = 0.0
    width: float = 1.0
    amplitude: complex = 1.0 + 0.0j

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"Unknown initial data kind '{self.kind}'.", kind=self.kind)
        if not self.width > 0:
            raise ConfigurationError('Initial width must be positive.', width=self.width)

    def support(self):
        return self.center - SUPPORT_WIDTHS * self.width, self.center + SUPPORT_WIDTHS * self.width

    def check_support(self, grid: Grid) -> None:
        lo, hi = self.support()
        limit = SUPPORT_FRACTION * grid.L
        if lo < -limit or hi > limit:
            raise ConfigurationError(
                'Initial data support does not fit inside the domain.',
                support_low=lo, support_high=hi, limit=limit,
            )

    def evaluate(self, y) -> np.ndarray:
        x = (np.asarray(y, dtype=float) - self.center) / self.width
        envelope = np.exp(-0.5 * x * x)
        if self.kind == HERMITE:
            envelope = x * envelope
        return complex(self.amplitude) * envelope

    def spectrum(self, eta) -> np.ndarray:
        """ĝ⁰(η) = ∫ g⁰(y) e^{−iηy} dy in closed form."""
        eta = np.asarray(eta, dtype=float)
        s = self.width
        base = complex(self.amplitude) * s * np.sqrt(2.0 * np.pi) * np.exp(-0.5 * (s * eta) ** 2 - 1j * eta * self.center)
        if self.kind == HERMITE:
            return -1j * s * eta * base
        return base


def initial_state(init: InitialData, grid: Grid, k: int, model: str = HYPOELLIPTIC) -> ModeState:
    init.check_support(grid)
    g = init.evaluate(grid.y).astype(complex)
    return ModeState(k=k, t=0.0, g=g, grid=grid, model=model)
