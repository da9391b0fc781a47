"""
Uniform grid on [−L, L], fourth-order differences and banded operators.

The pentadiagonal Laplacian acts on interior nodes with homogeneous Dirichlet
conditions; it backs both the Crank–Nicolson diffusion step and the Ḣ^{-1}
elliptic solve.
"""
from dataclasses import dataclass, replace
from functools import cached_property, lru_cache
from typing import Tuple

import numpy as np
from scipy import integrate, linalg

from apps.common.exceptions import BoundaryBreach, ConfigurationError, NonFinite, SolveFailure

HYPOELLIPTIC = 'hypoelliptic'
FULL_LAPLACIAN = 'full_laplacian'
MODELS = (HYPOELLIPTIC, FULL_LAPLACIAN)

MIN_POINTS = 16

# Interior five-point stencil of the second difference, in units of 1/(12h²).
_LAPLACIAN_STENCIL = (-1.0, 16.0, -30.0, 16.0, -1.0)


@dataclass(frozen=True)
class Grid:
    L: float
    N: int

    def __post_init__(self):
        if not self.L > 0:
            raise ConfigurationError('Grid half-width L must be positive.', L=self.L)
        if int(self.N) != self.N or self.N < MIN_POINTS:
            raise ConfigurationError(f'Grid needs N >= {MIN_POINTS} points.', N=self.N)

    @cached_property
    def h(self) -> float:
        return 2.0 * self.L / (self.N - 1)

    @cached_property
    def y(self) -> np.ndarray:
        nodes = np.linspace(-self.L, self.L, self.N)
        nodes.flags.writeable = False
        return nodes

    @property
    def nyquist(self) -> float:
        return np.pi / self.h


@dataclass(frozen=True, eq=False)
class ModeState:
    """Profile ĝ(t, k, ·) of one x-wavenumber on the grid."""

    k: int
    t: float
    g: np.ndarray
    grid: Grid
    model: str = HYPOELLIPTIC

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ConfigurationError('Wavenumber k must be an integer >= 1.', k=self.k)
        if self.model not in MODELS:
            raise ConfigurationError(f"Unknown model '{self.model}'.", model=self.model)
        if self.g.shape != (self.grid.N,):
            raise ConfigurationError('State length does not match the grid.', length=self.g.size, N=self.grid.N)

    def evolved(self, g: np.ndarray, t: float) -> 'ModeState':
        return replace(self, g=g, t=t)


def check_guard(state: ModeState, guard_tol: float) -> None:
    """The two outermost cells on each side must stay below guard_tol·max|g|."""
    g = state.g
    if not np.all(np.isfinite(g)):
        raise NonFinite(t=state.t)
    peak = np.abs(g).max()
    if peak == 0:
        return
    edge = max(np.abs(g[:2]).max(), np.abs(g[-2:]).max())
    if edge >= guard_tol * peak:
        raise BoundaryBreach(t=state.t, edge_ratio=edge / peak, guard_tol=guard_tol)


def diff1(g: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order first derivative, one-sided at the two end nodes on each side."""
    out = np.empty_like(g)
    out[2:-2] = g[:-4] - 8.0 * g[1:-3] + 8.0 * g[3:-1] - g[4:]
    out[0] = -25.0 * g[0] + 48.0 * g[1] - 36.0 * g[2] + 16.0 * g[3] - 3.0 * g[4]
    out[1] = -3.0 * g[0] - 10.0 * g[1] + 18.0 * g[2] - 6.0 * g[3] + g[4]
    out[-1] = 25.0 * g[-1] - 48.0 * g[-2] + 36.0 * g[-3] - 16.0 * g[-4] + 3.0 * g[-5]
    out[-2] = 3.0 * g[-1] + 10.0 * g[-2] - 18.0 * g[-3] + 6.0 * g[-4] - g[-5]
    return out / (12.0 * h)


def diff2(g: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order second derivative, one-sided at the two end nodes on each side."""
    out = np.empty_like(g)
    out[2:-2] = -g[:-4] + 16.0 * g[1:-3] - 30.0 * g[2:-2] + 16.0 * g[3:-1] - g[4:]
    for i, j in ((0, 1), (-1, -1)):
        s = slice(None) if j == 1 else slice(None, None, -1)
        w = g[s]
        out[i] = 45.0 * w[0] - 154.0 * w[1] + 214.0 * w[2] - 156.0 * w[3] + 61.0 * w[4] - 10.0 * w[5]
        out[i + j] = 10.0 * w[0] - 15.0 * w[1] - 4.0 * w[2] + 14.0 * w[3] - 6.0 * w[4] + w[5]
    return out / (12.0 * h * h)


def d1(state: ModeState) -> np.ndarray:
    return diff1(state.g, state.grid.h)


def d2(state: ModeState) -> np.ndarray:
    return diff2(state.g, state.grid.h)


def trapezoid_inner(a: np.ndarray, b: np.ndarray, h: float) -> complex:
    """⟨a, b⟩ = ∫ conj(a)·b dy by the trapezoidal rule."""
    return integrate.trapezoid(np.conj(a) * b, dx=h)


def norm_sq(a: np.ndarray, h: float) -> float:
    return float(integrate.trapezoid(np.abs(a) ** 2, dx=h))


def laplacian_apply(g: np.ndarray, h: float) -> np.ndarray:
    """Pentadiagonal Laplacian on interior nodes, zero ghost values outside."""
    padded = np.zeros(g.size + 2, dtype=g.dtype)
    padded[2:-2] = g[1:-1]
    out = np.zeros_like(g)
    out[1:-1] = sum(c * padded[i:i + g.size - 2] for i, c in enumerate(_LAPLACIAN_STENCIL))
    return out / (12.0 * h * h)


def _shifted_banded(n: int, h: float, shift: float, scale: float) -> np.ndarray:
    """Upper banded storage of shift·I − scale·A for the interior Laplacian A."""
    ab = np.zeros((3, n))
    base = 12.0 * h * h
    ab[2, :] = shift - scale * _LAPLACIAN_STENCIL[2] / base
    ab[1, 1:] = -scale * _LAPLACIAN_STENCIL[3] / base
    ab[0, 2:] = -scale * _LAPLACIAN_STENCIL[4] / base
    return ab


@lru_cache(maxsize=64)
def shifted_factor(grid: Grid, shift: float, scale: float) -> np.ndarray:
    """Cholesky factor of shift·I − scale·A, cached per grid and coefficients."""
    ab = _shifted_banded(grid.N - 2, grid.h, shift, scale)
    try:
        factor = linalg.cholesky_banded(ab, lower=False)
    except linalg.LinAlgError as exc:
        raise SolveFailure(str(exc), shift=shift, scale=scale) from exc
    factor.flags.writeable = False
    return factor


def shifted_solve(grid: Grid, shift: float, scale: float, rhs: np.ndarray) -> np.ndarray:
    """Solve (shift·I − scale·A)x = rhs on interior nodes; boundary entries of x are 0."""
    factor = shifted_factor(grid, float(shift), float(scale))
    out = np.zeros_like(rhs)
    out[1:-1] = linalg.cho_solve_banded((factor, False), rhs[1:-1], check_finite=False)
    return out


def hminus1_solve(state: ModeState) -> Tuple[np.ndarray, float]:
    """
    Solve (k² − ∂_yy)ψ = g with ψ(±L) = 0.

    Returns ψ and the per-mode squared Ḣ^{-1} norm Re⟨g, ψ⟩.
    """
    grid = state.grid
    psi = shifted_solve(grid, float(state.k) ** 2, 1.0, state.g)
    value = float(np.real(grid.h * np.vdot(state.g[1:-1], psi[1:-1])))
    return psi, max(value, 0.0)
