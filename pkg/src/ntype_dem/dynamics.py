"""Time integration and steady states of the N-type equations of motion."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.integrate import solve_ivp

from .model import (
    DIM,
    PSD_TOL,
    DensityMatrix,
    SystemParams,
    from_real_vector,
    rhs_array,
    superoperator,
    to_real_vector,
)

log = logging.getLogger(__name__)

TRAJECTORY_TRACE_TOL = 1e-9
STEADY_CAP = 1e4


class IntegrationError(RuntimeError):
    """Integration failed; ``time`` is the dimensionless time of the failure."""

    def __init__(self, message: str, time: float | None = None):
        super().__init__(message if time is None else f"t={time:.6g}: {message}")
        self.time = time


class ConvergenceError(RuntimeError):
    pass


class DegenerateSteadyStateError(RuntimeError):
    """The stationary subspace has dimension greater than one.

    ``solutions`` holds one Hermitian matrix per null-space basis vector,
    scaled to unit trace where the trace is nonzero and to unit max-norm
    otherwise.
    """

    def __init__(self, message: str, solutions: list[np.ndarray]):
        super().__init__(message)
        self.solutions = solutions


@dataclass(frozen=True)
class IntegratorConfig:
    step: float = 1e-3
    t_end: float = 20.0
    sample_every: int = 10
    method: Literal["rk4", "rk45"] = "rk4"
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"step must be > 0, got {self.step}")
        if not self.t_end > 0:
            raise ValueError(f"t_end must be > 0, got {self.t_end}")
        if not self.step < self.t_end:
            raise ValueError(f"step ({self.step}) must be smaller than t_end ({self.t_end})")
        if int(self.sample_every) != self.sample_every or self.sample_every < 1:
            raise ValueError(f"sample_every must be a positive integer, got {self.sample_every}")
        if self.method not in ("rk4", "rk45"):
            raise ValueError(f"method must be 'rk4' or 'rk45', got {self.method!r}")
        if self.method == "rk45" and not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("rel_tol and abs_tol must be > 0 for adaptive integration")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.step))


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: tuple[DensityMatrix, ...]
    params: SystemParams | None = None

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states differ in length")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    def __len__(self):
        return len(self.times)

    @property
    def final(self) -> DensityMatrix:
        return self.states[-1]

    def matrices(self) -> np.ndarray:
        return np.array([s.matrix for s in self.states])


def _checked_state(m: np.ndarray, t: float) -> DensityMatrix:
    try:
        return DensityMatrix(m, trace_tol=TRAJECTORY_TRACE_TOL, psd_tol=PSD_TOL)
    except ValueError as exc:
        raise IntegrationError(f"state left the physical set: {exc}", time=t) from exc


def _rk4_step(p: SystemParams, r: np.ndarray, h: float) -> np.ndarray:
    k1 = rhs_array(p, r)
    k2 = rhs_array(p, r + (h / 2) * k1)
    k3 = rhs_array(p, r + (h / 2) * k2)
    k4 = rhs_array(p, r + h * k3)
    return r + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def _evolve_rk4(params, rho0, cfg):
    h = cfg.step
    n = cfg.n_steps
    r = rho0.matrix.copy()
    times = [0.0]
    states = [rho0]
    for k in range(1, n + 1):
        r = _rk4_step(params, r, h)
        if k % cfg.sample_every == 0 or k == n:
            t = k * h
            states.append(_checked_state(r, t))
            times.append(t)
    return np.array(times), states


def _real_rhs(params):
    def f(_t, x):
        return to_real_vector(rhs_array(params, from_real_vector(x)))

    return f


def _evolve_rk45(params, rho0, cfg):
    n = cfg.n_steps
    idx = sorted(set(range(0, n + 1, cfg.sample_every)) | {n})
    t_eval = np.array(idx, dtype=float) * cfg.step
    t_eval[-1] = cfg.t_end
    sol = solve_ivp(
        _real_rhs(params),
        (0.0, cfg.t_end),
        to_real_vector(rho0),
        method="RK45",
        t_eval=t_eval,
        first_step=cfg.step,
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
    )
    if sol.status != 0:
        t_fail = float(sol.t[-1]) if sol.t.size else 0.0
        raise IntegrationError(f"adaptive integration failed: {sol.message}", time=t_fail)
    states = [rho0] + [_checked_state(from_real_vector(x), t) for t, x in zip(sol.t[1:], sol.y.T[1:])]
    return sol.t, states


def evolve(params: SystemParams, rho0: DensityMatrix | None = None, cfg: IntegratorConfig | None = None) -> Trajectory:
    """Integrate from tau = 0 to ``cfg.t_end``, recording every ``sample_every`` step.

    The default initial state is the ground state |1><1|. Every recorded state
    is re-validated; a violation raises :class:`IntegrationError` carrying the
    offending time.
    """
    if not isinstance(params, SystemParams):
        raise TypeError("params must be SystemParams")
    rho0 = DensityMatrix.bare(1) if rho0 is None else rho0
    if not isinstance(rho0, DensityMatrix):
        rho0 = DensityMatrix(rho0)
    cfg = IntegratorConfig() if cfg is None else cfg
    if cfg.method == "rk4":
        times, states = _evolve_rk4(params, rho0, cfg)
    else:
        times, states = _evolve_rk45(params, rho0, cfg)
    return Trajectory(np.asarray(times, dtype=float), tuple(states), params)


def stable_step(params: SystemParams, cap: float = 0.05) -> float:
    """RK4 step well inside the stability region for these rates."""
    rate = (
        2 * (params.rabi_31 + params.rabi_32 + params.rabi_41)
        + abs(params.delta_31) + abs(params.delta_32) + abs(params.delta_41)
        + params.gamma_31 + params.gamma_32 + params.gamma_41 + params.gamma_42
    )
    return min(cap, 1.0 / rate)


def steady_state_evolve(
    params: SystemParams,
    rho0: DensityMatrix | None = None,
    tol: float = 1e-10,
    *,
    step: float | None = None,
    sample_interval: float = 1.0,
    cap: float = STEADY_CAP,
) -> DensityMatrix:
    """Long-time limit by RK4 time stepping until max|d(rho)/d(tau)| < ``tol``.

    The derivative is tested once per ``sample_interval``; the first sampled
    state passing the test is returned. A stationary state is an exact fixed
    point of the RK4 map, so the tolerance can sit near rounding level.
    Raises :class:`ConvergenceError` if tau reaches ``cap`` first.
    """
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    rho0 = DensityMatrix.bare(1) if rho0 is None else rho0
    if not isinstance(rho0, DensityMatrix):
        rho0 = DensityMatrix(rho0)
    r = rho0.matrix.copy()
    if np.max(np.abs(rhs_array(params, r))) < tol:
        return rho0

    h = stable_step(params) if step is None else step
    per_sample = max(1, int(round(sample_interval / h)))
    n_max = int(np.ceil(cap / h))
    k = 0
    while k < n_max:
        for _ in range(per_sample):
            r = _rk4_step(params, r, h)
        k += per_sample
        if np.max(np.abs(rhs_array(params, r))) < tol:
            return _checked_state(r, k * h)
    raise ConvergenceError(
        f"no steady state within tau={cap:g} at tol={tol:g} "
        "(limit cycle, very slow relaxation, or tolerance too tight)"
    )


def steady_state_linear(params: SystemParams, *, null_tol: float = 1e-9) -> DensityMatrix:
    """Stationary state from the null space of the vectorized equations of motion.

    The 16x16 real superoperator is stacked with a trace row and solved by
    least squares for L x = 0, tr x = 1. Raises
    :class:`DegenerateSteadyStateError` when the null space is not
    one-dimensional.
    """
    L = superoperator(params)
    sv = np.linalg.svd(L, compute_uv=False)
    scale = max(sv[0], 1.0)
    null_dim = int(np.sum(sv < null_tol * scale))
    if null_dim > 1:
        _, _, vh = np.linalg.svd(L)
        basis = vh[-null_dim:]
        trace_idx = [i * DIM + i for i in range(DIM)]
        solutions = []
        for v in basis:
            tr = v[trace_idx].sum()
            m = from_real_vector(v / tr if abs(tr) > 1e-12 else v / np.abs(v).max())
            solutions.append(m)
        raise DegenerateSteadyStateError(
            f"stationary subspace has dimension {null_dim}; steady state is not unique",
            solutions,
        )
    trace_row = np.zeros(DIM * DIM)
    trace_row[[i * DIM + i for i in range(DIM)]] = 1.0
    a = np.vstack([L, trace_row])
    b = np.zeros(DIM * DIM + 1)
    b[-1] = 1.0
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    m = from_real_vector(x)
    residual = np.max(np.abs(rhs_array(params, m)))
    if residual >= 1e-10:
        log.warning("linear steady state residual %.3e", residual)
    return DensityMatrix(m, trace_tol=1e-10)
