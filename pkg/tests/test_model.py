import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ntype_dem.model import (
    DensityMatrix,
    ParameterError,
    StateError,
    SystemParams,
    from_real_vector,
    hamiltonian_resonant,
    rhs,
    superoperator,
    to_real_vector,
)
from oracles import lindblad_generator, lindblad_rhs, random_density_matrix, random_params

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_paper_defaults():
    p = SystemParams.paper_defaults(1, 2, 3, delta=0.7)
    assert (p.gamma_31, p.gamma_32, p.gamma_41, p.gamma_42) == (1, 1, 1, 1)
    assert p.delta_31 == p.delta_32 == p.delta_41 == 0.7
    assert (p.phi_31, p.phi_32) == (0, 0)


@pytest.mark.parametrize(
    "kwargs",
    [{"rabi_31": -1}, {"rabi_41": -0.1}, {"gamma_32": 0}, {"gamma_42": -1}, {"delta_31": float("nan")}],
)
def test_invalid_params_rejected(kwargs):
    with pytest.raises(ParameterError):
        SystemParams(**kwargs)


def test_density_matrix_validation():
    with pytest.raises(StateError):
        DensityMatrix(np.diag([0.5, 0.5, 0.5, 0]))
    with pytest.raises(StateError):
        DensityMatrix(np.diag([1.2, -0.2, 0, 0]))
    with pytest.raises(StateError):
        DensityMatrix(np.eye(3) / 3)
    # Lower triangle is ignored: storage is diagonal + upper triangle.
    m = np.diag([0.5, 0.5, 0, 0]).astype(complex)
    m[0, 1] = 0.1j
    m[1, 0] = 99.0
    rho = DensityMatrix(m)
    assert rho[1, 0] == -0.1j
    np.testing.assert_array_equal(rho.matrix, rho.matrix.conj().T)


def test_rhs_ground_state_without_drive_is_zero():
    out = rhs(SystemParams(), DensityMatrix.bare(1))
    np.testing.assert_array_equal(out, np.zeros((4, 4)))


def test_rhs_decay_of_level_3():
    out = rhs(SystemParams(), DensityMatrix.bare(3))
    expected = np.diag([1.0, 1.0, -2.0, 0.0])
    np.testing.assert_array_equal(out, expected)


def test_rhs_drive_on_13():
    out = rhs(SystemParams(rabi_31=5.0), DensityMatrix.bare(1))
    assert out[0, 2] == -5j
    assert out[0, 0] == 0
    assert out[2, 0] == 5j


def test_rhs_rejects_bad_inputs():
    with pytest.raises(ParameterError):
        rhs({"rabi_31": 1}, DensityMatrix.bare(1))
    with pytest.raises(StateError):
        rhs(SystemParams(), np.eye(4))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_rhs_matches_full_lindblad_evaluation(seed):
    rng = np.random.default_rng(seed)
    p = random_params(rng)
    rho = random_density_matrix(rng)
    out = rhs(p, rho)
    ref = lindblad_rhs(p, DensityMatrix(rho).matrix)
    np.testing.assert_allclose(out, ref, rtol=0, atol=1e-14 * max(1.0, np.abs(ref).max()))
    np.testing.assert_array_equal(out, out.conj().T)
    assert abs(np.trace(out)) < 1e-14


@settings(max_examples=50, deadline=None)
@given(seeds, st.floats(0, 1))
def test_rhs_is_linear(seed, alpha):
    rng = np.random.default_rng(seed)
    p = random_params(rng)
    r1, r2 = random_density_matrix(rng), random_density_matrix(rng)
    mix = alpha * r1 + (1 - alpha) * r2
    lhs = rhs(p, mix)
    rhs_sum = alpha * rhs(p, r1) + (1 - alpha) * rhs(p, r2)
    np.testing.assert_allclose(lhs, rhs_sum, atol=1e-13)


@settings(max_examples=30, deadline=None)
@given(seeds, st.floats(-10, 10), st.floats(-10, 10))
def test_phases_do_not_enter(seed, phi31, phi32):
    rng = np.random.default_rng(seed)
    p = random_params(rng)
    rho = random_density_matrix(rng)
    q = p.replace(phi_31=phi31, phi_32=phi32)
    np.testing.assert_array_equal(rhs(p, rho), rhs(q, rho))


def test_real_vector_round_trip(rng):
    m = random_density_matrix(rng)
    x = to_real_vector(m)
    assert x.dtype == float and x.shape == (16,)
    np.testing.assert_allclose(from_real_vector(x), m, atol=1e-15)
    assert x[0 * 4 + 2] == m[0, 2].real
    assert x[2 * 4 + 0] == m[0, 2].imag


def test_superoperator_matches_kronecker_generator(rng):
    for _ in range(10):
        p = random_params(rng)
        L = superoperator(p)
        gen = lindblad_generator(p)
        rho = random_density_matrix(rng)
        via_L = from_real_vector(L @ to_real_vector(rho))
        via_gen = (gen @ rho.ravel()).reshape(4, 4)
        np.testing.assert_allclose(via_L, via_gen, atol=1e-13)


def test_hamiltonian_resonant():
    np.testing.assert_array_equal(hamiltonian_resonant(SystemParams()), np.zeros((4, 4)))
    h = hamiltonian_resonant(SystemParams(rabi_41=1.0))
    np.testing.assert_allclose(np.linalg.eigvalsh(h), [-1, 0, 0, 1], atol=1e-15)
    h = hamiltonian_resonant(SystemParams(rabi_31=1, rabi_32=2, rabi_41=3))
    np.testing.assert_array_equal(h, h.conj().T)
    assert h[3, 0] == 3 and h[2, 0] == 1 and h[2, 1] == 2
