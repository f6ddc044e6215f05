"""Four-level N-type atom: parameters, density matrices and equations of motion.

Level scheme: lower states |1>, |2>; upper states |3>, |4>.  The driven
transitions are |1>-|3> (rabi_31), |2>-|3> (rabi_32) and |1>-|4> (rabi_41).
Every rate, detuning and Rabi frequency is measured in units of the reference
decay rate gamma, and time is the dimensionless tau = gamma * t.

Matrices use zero-based numpy indexing, so ``rho[0, 2]`` is rho_13.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace

import numpy as np

DIM = 4

TRACE_TOL = 1e-12
PSD_TOL = 1e-9

# Upper-triangle index pairs in row-major order.
COHERENCES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


class ParameterError(ValueError):
    """Raised for physically invalid parameter sets."""


class StateError(ValueError):
    """Raised when a matrix is not a valid density matrix."""


@dataclass(frozen=True)
class SystemParams:
    rabi_31: float = 0.0
    rabi_32: float = 0.0
    rabi_41: float = 0.0
    delta_31: float = 0.0
    delta_32: float = 0.0
    delta_41: float = 0.0
    gamma_31: float = 1.0
    gamma_32: float = 1.0
    gamma_41: float = 1.0
    gamma_42: float = 1.0
    # Field phases of the rotating frame. They never enter the equations of
    # motion and are carried only so that configurations round-trip.
    phi_31: float = 0.0
    phi_32: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = float(getattr(self, f.name))
            if not np.isfinite(value):
                raise ParameterError(f"{f.name} must be finite, got {value!r}")
            object.__setattr__(self, f.name, value)
        for name in ("rabi_31", "rabi_32", "rabi_41"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be non-negative, got {getattr(self, name)}")
        for name in ("gamma_31", "gamma_32", "gamma_41", "gamma_42"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be strictly positive, got {getattr(self, name)}")

    @classmethod
    def paper_defaults(
        cls,
        rabi_31: float = 0.0,
        rabi_32: float = 0.0,
        rabi_41: float = 0.0,
        delta: float = 0.0,
        **kwargs,
    ) -> SystemParams:
        """Unit decay rates on all four channels and one common detuning."""
        return cls(
            rabi_31=rabi_31,
            rabi_32=rabi_32,
            rabi_41=rabi_41,
            delta_31=delta,
            delta_32=delta,
            delta_41=delta,
            **kwargs,
        )

    @classmethod
    def equal_drive(cls, omega: float, delta: float = 0.0) -> SystemParams:
        """All three Rabi frequencies equal to ``omega``, common detuning."""
        return cls.paper_defaults(omega, omega, omega, delta)

    def replace(self, **changes) -> SystemParams:
        return replace(self, **changes)

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite 4x4 matrix.

    Only the diagonal and the upper triangle of the input are read; the lower
    triangle is always the conjugate mirror, so Hermiticity holds exactly.
    """

    __slots__ = ("_data",)

    def __init__(self, matrix, *, trace_tol: float = TRACE_TOL, psd_tol: float = PSD_TOL):
        data = hermitian_from_upper(np.asarray(matrix, dtype=complex))
        trace = np.trace(data).real
        if abs(trace - 1.0) >= trace_tol:
            raise StateError(f"trace is {trace!r}, expected 1 within {trace_tol}")
        lowest = np.linalg.eigvalsh(data)[0]
        if lowest < -psd_tol:
            raise StateError(f"minimum eigenvalue {lowest:.3e} below -{psd_tol}")
        data.setflags(write=False)
        self._data = data

    @classmethod
    def pure(cls, ket) -> DensityMatrix:
        ket = np.asarray(ket, dtype=complex)
        ket = ket / np.linalg.norm(ket)
        return cls(np.outer(ket, ket.conj()))

    @classmethod
    def bare(cls, level: int) -> DensityMatrix:
        """Projector onto bare state ``|level>`` (1-based, as in the level scheme)."""
        if level not in (1, 2, 3, 4):
            raise StateError(f"bare level must be 1..4, got {level}")
        m = np.zeros((DIM, DIM), dtype=complex)
        m[level - 1, level - 1] = 1.0
        return cls(m)

    @property
    def matrix(self) -> np.ndarray:
        return self._data

    def populations(self) -> np.ndarray:
        return self._data.diagonal().real.copy()

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self._data)

    def __array__(self, dtype=None, copy=None):
        return self._data if dtype is None else self._data.astype(dtype)

    def __getitem__(self, index):
        return self._data[index]

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return np.array_equal(self._data, other._data)

    __hash__ = None

    def __repr__(self):
        return f"DensityMatrix(populations={np.round(self.populations(), 6).tolist()})"


def hermitian_from_upper(matrix: np.ndarray) -> np.ndarray:
    """Rebuild a Hermitian matrix from the real diagonal and upper triangle."""
    if matrix.shape != (DIM, DIM):
        raise StateError(f"expected a {DIM}x{DIM} matrix, got shape {matrix.shape}")
    upper = np.triu(matrix, 1)
    out = upper + upper.conj().T
    out[np.diag_indices(DIM)] = matrix.diagonal().real
    return out


def _as_array(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return np.asarray(rho, dtype=complex)


def rhs_array(p: SystemParams, rho: np.ndarray) -> np.ndarray:
    """Time derivative of ``rho`` without input validation.

    ``rho`` is read through its diagonal and upper triangle only. The
    returned matrix is assembled from those same elements and mirrored.
    """
    (r11, r12, r13, r14), (_, r22, r23, r24), (_, _, r33, r34), (_, _, _, r44) = rho.tolist()
    r11, r22, r33, r44 = r11.real, r22.real, r33.real, r44.real
    r21, r31, r41 = r12.conjugate(), r13.conjugate(), r14.conjugate()
    r32, r42, r43 = r23.conjugate(), r24.conjugate(), r34.conjugate()

    o31, o32, o41 = p.rabi_31, p.rabi_32, p.rabi_41
    d31, d32, d41 = p.delta_31, p.delta_32, p.delta_41
    g31, g32, g41, g42 = p.gamma_31, p.gamma_32, p.gamma_41, p.gamma_42
    g3 = g31 + g32
    g4 = g41 + g42
    j = 1j

    d11 = g31 * r33 + g41 * r44 + j * o31 * (r31 - r13) + j * o41 * (r41 - r14)
    d22 = g32 * r33 + g42 * r44 + j * o32 * (r32 - r23)
    d33 = -g3 * r33 + j * o31 * (r13 - r31) + j * o32 * (r23 - r32)
    d44 = -g4 * r44 + j * o41 * (r14 - r41)
    # Ground-state coherence carries no damping.
    d12 = -j * (d31 - d32) * r12 + j * o31 * r32 + j * o41 * r42 - j * o32 * r13
    d13 = -(g3 / 2 + j * d31) * r13 - j * o32 * r12 + j * o31 * (r33 - r11) + j * o41 * r43
    d14 = -(g4 / 2 + j * d41) * r14 + j * o31 * r34 + j * o41 * (r44 - r11)
    d23 = -(g3 / 2 + j * d32) * r23 - j * o31 * r21 + j * o32 * (r33 - r22)
    d24 = -(g4 / 2 + j * (d41 - d31 + d32)) * r24 + j * o32 * r34 - j * o41 * r21
    d34 = (
        -((g3 + g4) / 2 + j * (d41 - d31)) * r34
        + j * o31 * r14
        + j * o32 * r24
        - j * o41 * r31
    )

    c12, c13, c14 = d12.conjugate(), d13.conjugate(), d14.conjugate()
    c23, c24, c34 = d23.conjugate(), d24.conjugate(), d34.conjugate()
    return np.array(
        [
            [d11.real, d12, d13, d14],
            [c12, d22.real, d23, d24],
            [c13, c23, d33.real, d34],
            [c14, c24, c34, d44.real],
        ],
        dtype=complex,
    )


def rhs(params: SystemParams, rho) -> np.ndarray:
    """Right-hand side d(rho)/d(tau) of the density-matrix equations of motion.

    All Rabi couplings enter as real non-negative magnitudes. The result is
    Hermitian by construction and traceless.
    """
    if not isinstance(params, SystemParams):
        raise ParameterError(f"expected SystemParams, got {type(params).__name__}")
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    return rhs_array(params, rho.matrix)


def hamiltonian_resonant(params: SystemParams) -> np.ndarray:
    """Interaction Hamiltonian at multi-photon resonance, hbar = 1."""
    if not isinstance(params, SystemParams):
        raise ParameterError(f"expected SystemParams, got {type(params).__name__}")
    h = np.zeros((DIM, DIM), dtype=complex)
    h[3, 0] = h[0, 3] = params.rabi_41
    h[2, 0] = h[0, 2] = params.rabi_31
    h[2, 1] = h[1, 2] = params.rabi_32
    return h


# Real 16-vector layout, row-major over (i, j):
#   i == j -> rho_ii,  i < j -> Re rho_ij,  i > j -> Im rho_ji.


def to_real_vector(rho) -> np.ndarray:
    m = _as_array(rho)
    upper = np.triu(m, 1)
    out = np.triu(upper.real, 1) + np.triu(upper.imag, 1).T
    out[np.diag_indices(DIM)] = m.diagonal().real
    return out.ravel()


def from_real_vector(x) -> np.ndarray:
    """Inverse of :func:`to_real_vector`; returns a Hermitian complex array."""
    grid = np.asarray(x, dtype=float).reshape(DIM, DIM)
    upper = np.triu(grid, 1) + 1j * np.triu(grid.T, 1)
    out = upper + upper.conj().T
    out[np.diag_indices(DIM)] = grid.diagonal()
    return out


def superoperator(params: SystemParams) -> np.ndarray:
    """Real 16x16 matrix L with to_real_vector(rhs(rho)) = L @ to_real_vector(rho)."""
    cols = []
    for k in range(DIM * DIM):
        e = np.zeros(DIM * DIM)
        e[k] = 1.0
        cols.append(to_real_vector(rhs_array(params, from_real_vector(e))))
    return np.column_stack(cols)
