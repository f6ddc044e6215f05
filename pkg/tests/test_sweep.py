import numpy as np
import pytest

from ntype_dem.model import SystemParams
from ntype_dem.observables import LN4
from ntype_dem.sweep import SweepGrid, run_sweep, steady_dem


def test_sweep_grid_validation():
    with pytest.raises(ValueError):
        SweepGrid(np.array([1.0, 1.0]), np.array([0.0]), np.zeros((2, 1)), np.ones((2, 1), bool))
    with pytest.raises(ValueError):
        SweepGrid(np.array([1.0]), np.array([0.0]), np.array([[2.0]]), np.ones((1, 1), bool))


def test_sweep_values_and_determinism():
    omegas = np.array([1.0, 5.0])
    deltas = np.array([-1.0, 0.0, 1.0])
    serial = run_sweep(omegas, deltas, workers=1)
    parallel = run_sweep(omegas, deltas, workers=2)
    np.testing.assert_array_equal(serial.dem, parallel.dem)
    assert serial.converged.all()
    assert serial.at(5.0, 0.0) == pytest.approx(1.35715225, abs=1e-8)
    # Symmetric in the common detuning.
    np.testing.assert_allclose(serial.dem[:, 0], serial.dem[:, 2], atol=1e-10)
    assert np.all(serial.dem <= LN4)


def test_degenerate_cell_falls_back_to_evolution():
    dem, route = steady_dem(SystemParams())
    assert route == "evolve" and dem == 0.0


def test_failed_cell_is_flagged(monkeypatch):
    from ntype_dem import sweep

    def boom(*a, **k):
        raise sweep.DegenerateSteadyStateError("forced", [])

    monkeypatch.setattr(sweep, "steady_state_linear", boom)
    monkeypatch.setattr(sweep, "steady_state_evolve", lambda *a, **k: (_ for _ in ()).throw(RuntimeError("stuck")))
    grid = run_sweep([1.0, 2.0], [0.0], workers=1)
    assert not grid.converged.any()
    assert len(grid.errors) == 2 and "stuck" in grid.errors[0]
