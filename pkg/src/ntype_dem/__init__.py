"""Entanglement between a driven four-level N-type atom and its spontaneous emission."""

__version__ = "0.1.0"

from .analytic import (
    AnalyticSteadyState,
    analytic_coherence,
    analytic_dem,
    analytic_eigenvalues,
    compare_analytic_numeric,
)
from .dynamics import (
    IntegratorConfig,
    Trajectory,
    evolve,
    steady_state_evolve,
    steady_state_linear,
)
from .model import DensityMatrix, SystemParams, hamiltonian_resonant, rhs
from .observables import (
    DressedBasis,
    dem_series,
    dressed_basis,
    numeric_dressed_basis,
    populations,
    von_neumann_dem,
)
from .sweep import SweepGrid, run_sweep

__all__ = [
    "AnalyticSteadyState",
    "DensityMatrix",
    "DressedBasis",
    "IntegratorConfig",
    "SweepGrid",
    "SystemParams",
    "Trajectory",
    "analytic_coherence",
    "analytic_dem",
    "analytic_eigenvalues",
    "compare_analytic_numeric",
    "dem_series",
    "dressed_basis",
    "evolve",
    "hamiltonian_resonant",
    "numeric_dressed_basis",
    "populations",
    "rhs",
    "run_sweep",
    "steady_state_evolve",
    "steady_state_linear",
    "von_neumann_dem",
]
