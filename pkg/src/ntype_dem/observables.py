"""Entanglement measure and population analysis in bare and dressed bases."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .model import DIM, PSD_TOL, DensityMatrix, SystemParams, StateError, hamiltonian_resonant

LN4 = float(np.log(4.0))


class DegenerateBasisError(ValueError):
    """The closed-form dressed states are undefined for a zero Rabi frequency."""


def entropy_from_eigenvalues(eigenvalues) -> float:
    """Natural-log Shannon entropy of a spectrum, with 0 ln 0 = 0.

    Eigenvalues in [-1e-9, 0) are treated as rounding noise and clamped to 0.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.min() < -PSD_TOL:
        raise StateError(f"eigenvalue {lam.min():.3e} below -{PSD_TOL}: not a density matrix")
    lam = np.clip(lam, 0.0, 1.0)
    nz = lam[lam > 0.0]
    return float(max(0.0, -np.sum(nz * np.log(nz))))


def von_neumann_dem(rho) -> float:
    """Degree of entanglement: von Neumann entropy of the reduced atomic state."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    return entropy_from_eigenvalues(rho.eigenvalues())


@dataclass(frozen=True)
class DressedBasis:
    """Orthonormal dressed states, columns of ``vectors`` in ascending energy.

    ``energies`` are the matching eigenvalues of the resonant interaction
    Hamiltonian. ``labels`` maps each column back to the closed-form state it
    came from (``"D1"`` .. ``"D4"``), or ``"numeric"`` for the fallback path.
    """

    vectors: np.ndarray
    energies: np.ndarray
    labels: tuple[str, ...]
    omega3: float | None = None
    omega41: float | None = None
    symmetric: bool = True

    @property
    def A(self) -> float:
        return float(np.sqrt(4 * self.omega3**4 + self.omega41**4))

    @property
    def B(self) -> float:
        return 2 * self.omega3**2 + self.omega41**2

    @property
    def C(self) -> float:
        return 2 * self.omega3**2 - self.omega41**2

    def gram_residual(self) -> float:
        gram = self.vectors.conj().T @ self.vectors
        return float(np.max(np.abs(gram - np.eye(DIM))))

    def __getitem__(self, k: int) -> np.ndarray:
        return self.vectors[:, k]


def _closed_form_vectors(omega3: float, omega41: float) -> list[np.ndarray]:
    o3, o41 = omega3, omega41
    a = np.sqrt(4 * o3**4 + o41**4)
    b = 2 * o3**2 + o41**2
    c = 2 * o3**2 - o41**2
    # Cancellation-free forms; (a + c)(a - c) = (a + b)(b - a) = 4 o3^2 o41^2.
    prod = 4 * o3**2 * o41**2
    b_minus_a = prod / (a + b)
    o41sq_minus_a = -4 * o3**4 / (o41**2 + a)
    if c >= 0:
        a_plus_c = a + c
        a_minus_c = prod / a_plus_c
    else:
        a_minus_c = a - c
        a_plus_c = prod / a_minus_c
    s_minus = np.sqrt(b_minus_a)
    s_plus = np.sqrt(a + b)
    r2 = np.sqrt(2.0)

    def vec(s, sign, two_num, three_num):
        return np.array(
            [
                -sign * s / (r2 * o41),
                sign * s * two_num / (2 * r2 * o3**2 * o41),
                -three_num / (2 * o3 * o41),
                1.0,
            ]
        )

    # |3> coefficient follows from the |2> row of the eigenvalue equation:
    # -(a - c) on the inner pair, +(a + c) on the outer pair.
    return [
        vec(s_minus, +1, o41**2 + a, a_minus_c),
        vec(s_minus, -1, o41**2 + a, a_minus_c),
        vec(s_plus, +1, o41sq_minus_a, -a_plus_c),
        vec(s_plus, -1, o41sq_minus_a, -a_plus_c),
    ]


def dressed_basis(omega3: float, omega41: float) -> DressedBasis:
    """Closed-form dressed states for rabi_31 = rabi_32 = omega3 at resonance.

    Each vector is normalized with its |4> component real and positive, and
    the basis is ordered by ascending energy. For omega3 = omega41 = 1 the
    ordering is D3, D1, D2, D4 (energies -1.618, -0.618, +0.618, +1.618).
    """
    if not (omega3 > 0 and omega41 > 0):
        raise DegenerateBasisError(
            f"degenerate dressed basis: omega3={omega3}, omega41={omega41} must both be > 0"
        )
    h = hamiltonian_resonant(SystemParams(rabi_31=omega3, rabi_32=omega3, rabi_41=omega41))
    raw = _closed_form_vectors(float(omega3), float(omega41))
    vecs = [v / np.linalg.norm(v) for v in raw]
    energies = [float(np.real(v @ h @ v)) for v in vecs]
    order = np.argsort(energies, kind="stable")
    return DressedBasis(
        vectors=np.column_stack([vecs[k] for k in order]).astype(complex),
        energies=np.array([energies[k] for k in order]),
        labels=tuple(f"D{k + 1}" for k in order),
        omega3=float(omega3),
        omega41=float(omega41),
        symmetric=True,
    )


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # Reference component: |4> if non-negligible, else the largest one.
    ref = 3 if abs(v[3]) > 1e-12 else int(np.argmax(np.abs(v)))
    return v * (abs(v[ref]) / v[ref])


def numeric_dressed_basis(params: SystemParams) -> DressedBasis:
    """Eigenvectors of the resonant Hamiltonian for arbitrary Rabi frequencies."""
    energies, vecs = np.linalg.eigh(hamiltonian_resonant(params))
    cols = [_fix_phase(vecs[:, k]) for k in range(DIM)]
    return DressedBasis(
        vectors=np.column_stack(cols),
        energies=energies,
        labels=("numeric",) * DIM,
        symmetric=params.rabi_31 == params.rabi_32,
    )


def basis_for(params: SystemParams) -> DressedBasis:
    """Closed-form basis where it applies, numeric eigendecomposition otherwise."""
    if params.rabi_31 == params.rabi_32 and params.rabi_31 > 0 and params.rabi_41 > 0:
        return dressed_basis(params.rabi_31, params.rabi_41)
    return numeric_dressed_basis(params)


@dataclass(frozen=True)
class PopulationRecord:
    values: np.ndarray
    basis: Literal["bare", "dressed"]

    def __post_init__(self):
        total = float(np.sum(self.values))
        if abs(total - 1.0) > 1e-9:
            raise StateError(f"{self.basis} populations sum to {total!r}")

    def __iter__(self):
        return iter(self.values.tolist())

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        return float(self.values[k])


def populations(rho, basis: str | DressedBasis = "bare") -> PopulationRecord:
    """Populations of ``rho`` in the bare basis or a dressed basis."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    m = rho.matrix
    if isinstance(basis, DressedBasis):
        p = np.einsum("ik,ij,jk->k", basis.vectors.conj(), m, basis.vectors)
        if np.max(np.abs(p.imag)) > 1e-12:
            raise StateError("dressed populations have a non-negligible imaginary part")
        return PopulationRecord(p.real.copy(), "dressed")
    if basis != "bare":
        raise ValueError(f"basis must be 'bare' or a DressedBasis, got {basis!r}")
    return PopulationRecord(m.diagonal().real.copy(), "bare")


def dem_series(traj) -> list[tuple[float, float]]:
    """(time, DEM) pairs along a trajectory, in time order."""
    return [(float(t), von_neumann_dem(s)) for t, s in zip(traj.times, traj.states)]
