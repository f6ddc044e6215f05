"""Closed-form steady state for equal Rabi frequencies at multi-photon resonance.

The coherence D is shared by rho_32, rho_41 and rho_42 in the approximation
that all populations are 1/4; the four eigenvalues of the resulting density
matrix depend only on |D|.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .dynamics import steady_state_linear
from .model import SystemParams
from .observables import entropy_from_eigenvalues, von_neumann_dem

SQRT5 = math.sqrt(5.0)
_INNER = 2 * math.sqrt(2.0) * math.sqrt(3 - SQRT5)
_OUTER = 2 * math.sqrt(2.0) * math.sqrt(3 + SQRT5)


def analytic_coherence(omega: float, gamma: float = 1.0) -> complex:
    """Steady-state coherence D = i gamma omega^3 / (4 omega^4 + 2 gamma^2 omega^2)."""
    if not omega > 0:
        raise ValueError(f"omega must be > 0, got {omega}")
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    # Divided through by omega^2.
    return 1j * gamma * omega / (4 * omega**2 + 2 * gamma**2)


def _pair(split: float) -> tuple[float, float]:
    # Round the split to the grid of 1 + split so that (1 - s) + (1 + s) == 2
    # holds exactly; dividing by 4 is exact too.
    s = (1.0 + split) - 1.0
    return (1.0 - s) / 4, (1.0 + s) / 4


def analytic_eigenvalues(D: complex) -> tuple[float, float, float, float]:
    """Eigenvalues (lambda1, lambda2, lambda3, lambda4); D^2 enters as |D|^2."""
    mod = abs(D)
    lam1, lam2 = _pair(_INNER * mod)
    lam3, lam4 = _pair(_OUTER * mod)
    return lam1, lam2, lam3, lam4


@dataclass(frozen=True)
class AnalyticSteadyState:
    omega: float
    coherence: complex
    eigenvalues: tuple[float, float, float, float]
    valid: bool
    dem: float | None

    @classmethod
    def at(cls, omega: float, gamma: float = 1.0) -> AnalyticSteadyState:
        D = analytic_coherence(omega, gamma)
        lam = analytic_eigenvalues(D)
        valid = all(0.0 <= x <= 1.0 for x in lam)
        return cls(
            omega=float(omega),
            coherence=D,
            eigenvalues=lam,
            valid=valid,
            dem=entropy_from_eigenvalues(lam) if valid else None,
        )


def analytic_dem(omega: float, gamma: float = 1.0) -> float | None:
    """Entropy of the closed-form spectrum, or None where an eigenvalue is negative."""
    return AnalyticSteadyState.at(omega, gamma).dem


@dataclass(frozen=True)
class ComparisonRow:
    omega: float
    dem_numeric: float | None
    dem_analytic: float | None
    error: str | None = None

    @property
    def analytic_valid(self) -> bool:
        return self.dem_analytic is not None

    @property
    def abs_diff(self) -> float | None:
        if self.dem_numeric is None or self.dem_analytic is None:
            return None
        return abs(self.dem_numeric - self.dem_analytic)


def _compare_row(omega: float, template: SystemParams) -> ComparisonRow:
    params = template.replace(rabi_31=omega, rabi_32=omega, rabi_41=omega)
    gamma = template.gamma_31
    error = None
    try:
        numeric = von_neumann_dem(steady_state_linear(params))
    except Exception as exc:  # row is marked, sweep continues
        numeric, error = None, f"{type(exc).__name__}: {exc}"
    return ComparisonRow(omega, numeric, analytic_dem(omega, gamma), error)


def compare_analytic_numeric(omega_grid, template: SystemParams | None = None, workers: int = 1) -> list[ComparisonRow]:
    """Numeric (linear steady state) vs closed-form DEM on an ascending Rabi grid.

    ``template`` supplies detunings and decay rates; it must describe the
    resonant, equal-decay configuration the closed form assumes.
    """
    template = SystemParams.paper_defaults() if template is None else template
    grid = [float(x) for x in omega_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("omega_grid must be strictly ascending")
    if grid and not (grid[0] > 0 and grid[-1] <= 20.0):
        raise ValueError("omega_grid must lie in (0, 20]")
    gammas = {template.gamma_31, template.gamma_32, template.gamma_41, template.gamma_42}
    if len(gammas) != 1 or any((template.delta_31, template.delta_32, template.delta_41)):
        raise ValueError("template must have zero detunings and equal decay rates")
    if workers <= 1:
        return [_compare_row(w, template) for w in grid]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_compare_row, grid, [template] * len(grid)))
