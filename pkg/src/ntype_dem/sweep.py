"""Steady-state DEM maps over (Rabi frequency, detuning)."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import DegenerateSteadyStateError, steady_state_evolve, steady_state_linear
from .model import SystemParams
from .observables import LN4, von_neumann_dem


@dataclass(frozen=True)
class SweepGrid:
    omega_axis: np.ndarray
    delta_axis: np.ndarray
    dem: np.ndarray  # shape (len(omega_axis), len(delta_axis)); NaN where not converged
    converged: np.ndarray
    errors: tuple[str, ...] = ()

    def __post_init__(self):
        for name in ("omega_axis", "delta_axis"):
            axis = getattr(self, name)
            if np.any(np.diff(axis) <= 0):
                raise ValueError(f"{name} must be strictly ascending")
        shape = (len(self.omega_axis), len(self.delta_axis))
        if self.dem.shape != shape or self.converged.shape != shape:
            raise ValueError(f"dem and converged must have shape {shape}")
        ok = self.dem[self.converged]
        if ok.size and (ok.min() < 0 or ok.max() > LN4 + 1e-12):
            raise ValueError("converged DEM outside [0, ln 4]")

    def at(self, omega: float, delta: float) -> float:
        i = int(np.argmin(np.abs(self.omega_axis - omega)))
        j = int(np.argmin(np.abs(self.delta_axis - delta)))
        return float(self.dem[i, j])

    def cells(self):
        """(omega, delta, dem, converged) in row-major cell order."""
        for i, w in enumerate(self.omega_axis):
            for j, d in enumerate(self.delta_axis):
                yield float(w), float(d), float(self.dem[i, j]), bool(self.converged[i, j])


def steady_dem(params: SystemParams, steady_tol: float = 1e-10) -> tuple[float, str]:
    """DEM of the steady state; returns (value, route) with NaN on failure.

    The linear null-space route is tried first; a degenerate null space falls
    back to long-time evolution from |1><1|.
    """
    try:
        return von_neumann_dem(steady_state_linear(params)), "linear"
    except DegenerateSteadyStateError:
        pass
    try:
        return von_neumann_dem(steady_state_evolve(params, tol=steady_tol)), "evolve"
    except Exception as exc:  # cell is flagged, sweep continues
        return float("nan"), f"{type(exc).__name__}: {exc}"


def _cell(args):
    omega, delta, template, steady_tol = args
    params = template.replace(
        rabi_31=omega, rabi_32=omega, rabi_41=omega,
        delta_31=delta, delta_32=delta, delta_41=delta,
    )
    return steady_dem(params, steady_tol)


def run_sweep(
    omega_axis,
    delta_axis,
    template: SystemParams | None = None,
    workers: int | None = None,
    steady_tol: float = 1e-10,
) -> SweepGrid:
    """Equal Rabi frequencies and one common detuning on every cell.

    Cells are evaluated by a bounded process pool (``workers`` defaults to the
    CPU count; 1 runs serially) and collected in cell-index order, so the
    result does not depend on the worker count.
    """
    template = SystemParams.paper_defaults() if template is None else template
    w_axis = np.asarray(omega_axis, dtype=float)
    d_axis = np.asarray(delta_axis, dtype=float)
    jobs = [(float(w), float(d), template, steady_tol) for w in w_axis for d in d_axis]
    workers = (os.cpu_count() or 1) if workers is None else workers
    if workers <= 1 or len(jobs) < 2:
        results = [_cell(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_cell, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    dem = np.array([r[0] for r in results]).reshape(len(w_axis), len(d_axis))
    errors = tuple(
        f"omega={j[0]:g} delta={j[1]:g}: {r[1]}"
        for j, r in zip(jobs, results)
        if r[1] not in ("linear", "evolve")
    )
    return SweepGrid(w_axis, d_axis, dem, ~np.isnan(dem), errors)
