import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from ntype_dem.analytic import (
    AnalyticSteadyState,
    analytic_coherence,
    analytic_dem,
    analytic_eigenvalues,
    compare_analytic_numeric,
)
from ntype_dem.model import SystemParams


def spectrum_oracle(D):
    """Eigenvalues of the matrix with populations 1/4 and rho_32 = rho_41 = rho_42 = D."""
    m = np.eye(4, dtype=complex) / 4
    for i, j in ((2, 1), (3, 0), (3, 1)):
        m[i, j] = D
        m[j, i] = np.conj(D)
    return np.linalg.eigvalsh(m)


def test_coherence_values():
    assert analytic_coherence(5.0) == pytest.approx(125j / 2550, abs=1e-15)
    assert analytic_coherence(5.0).real == 0
    assert abs(analytic_coherence(1e6)) == pytest.approx(1 / 4e6, rel=1e-6)
    with pytest.raises(ValueError):
        analytic_coherence(0.0)
    with pytest.raises(ValueError):
        analytic_coherence(1.0, gamma=0)


def test_coherence_maximum():
    res = minimize_scalar(lambda w: -abs(analytic_coherence(w)), bounds=(0.01, 10), method="bounded", options={"xatol": 1e-10})
    assert res.x == pytest.approx(1 / math.sqrt(2), abs=1e-6)
    assert abs(analytic_coherence(1 / math.sqrt(2))) == pytest.approx(1 / (4 * math.sqrt(2)), abs=1e-15)
    grid = np.linspace(0.01, 50, 5000)
    assert max(abs(analytic_coherence(w)) for w in grid) <= 1 / (4 * math.sqrt(2)) + 1e-15


def test_eigenvalues_values():
    assert analytic_eigenvalues(0) == (0.25, 0.25, 0.25, 0.25)
    lam = analytic_eigenvalues(analytic_coherence(5.0))
    np.testing.assert_allclose(lam, (0.2197042162, 0.2802957838, 0.1706846084, 0.3293153916), atol=1e-9)
    state = AnalyticSteadyState.at(1 / math.sqrt(2))
    assert state.eigenvalues[2] < 0
    assert not state.valid and state.dem is None


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 0.15), st.floats(0, 2 * math.pi))
def test_eigenvalues_match_matrix_oracle(mod, phase):
    D = mod * complex(math.cos(phase), math.sin(phase))
    np.testing.assert_allclose(sorted(analytic_eigenvalues(D)), spectrum_oracle(D), atol=1e-14)


@settings(max_examples=500, deadline=None)
@given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_eigenvalues_sum_to_one_exactly(D):
    assert math.fsum(analytic_eigenvalues(D)) == 1.0


def test_analytic_dem_values():
    assert analytic_dem(5.0) == pytest.approx(1.357, abs=1e-3)
    assert 1.38 < analytic_dem(50.0) < math.log(4)
    assert analytic_dem(1 / math.sqrt(2)) is None


def test_analytic_dem_monotone_above_2():
    grid = np.arange(2.0, 50.0, 0.25)
    values = [analytic_dem(w) for w in grid]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_compare_rows():
    rows = compare_analytic_numeric([0.5, 5.0, 10.0])
    low, mid, high = rows
    assert mid.abs_diff < 0.02
    assert high.abs_diff < 0.01
    assert not low.analytic_valid and low.abs_diff is None and low.dem_numeric is not None


def test_compare_parallel_matches_serial():
    grid = [1.0, 2.0, 3.0, 4.0]
    assert compare_analytic_numeric(grid, workers=2) == compare_analytic_numeric(grid)


def test_compare_rejects_bad_input():
    with pytest.raises(ValueError):
        compare_analytic_numeric([2.0, 1.0])
    with pytest.raises(ValueError):
        compare_analytic_numeric([0.0, 1.0])
    with pytest.raises(ValueError):
        compare_analytic_numeric([1.0], SystemParams.paper_defaults(delta=1.0))
