"""CTCS comparator: CFL guards, trivial invariance, second-order accuracy."""
import numpy as np
import pytest

from wavedg.reference import (
    FDGrid1D,
    ctcs_solve_1d,
    ctcs_solve_2d,
    make_grid_1d,
    make_grid_2d,
)


def test_cfl_guard():
    with pytest.raises(ValueError):
        FDGrid1D(0.0, 1.0, 10, dt=0.2)  # dx = 0.1 < dt
    FDGrid1D(0.0, 1.0, 10, dt=0.05)
    with pytest.raises(ValueError):
        make_grid_2d(0, 1, 0, 1, 10, 10, 0.25, dt=0.09)


def test_constant_state_is_preserved():
    grid, steps = make_grid_1d(0.0, 1.0, 50, 0.3)
    x, u = ctcs_solve_1d(lambda x: 0 * x + 2.5, lambda x: 0 * x, None, grid, steps)
    assert np.allclose(u, 2.5, atol=1e-14)


def test_travelling_wave_second_order():
    errs = []
    for n in (100, 200, 400):
        grid, steps = make_grid_1d(-1.0, 1.0, n, 0.25)
        x, u = ctcs_solve_1d(
            lambda x: np.sin(np.pi * x), lambda x: -np.pi * np.cos(np.pi * x), None,
            grid, steps)
        errs.append(np.max(np.abs(u - np.sin(np.pi * (x - 0.25)))))
    slopes = [np.log2(errs[i] / errs[i + 1]) for i in range(2)]
    for sl in slopes:
        assert 1.8 <= sl <= 2.2


def test_zero_data_2d():
    grid, steps = make_grid_2d(0, 1, 0, 1, 20, 20, 0.2)
    _, _, u = ctcs_solve_2d(lambda x, y: 0 * x, lambda x, y: 0 * x, None, grid, steps)
    assert np.max(np.abs(u)) == 0.0


def test_plane_wave_second_order_2d():
    errs = []
    sq2 = np.sqrt(2.0)
    for n in (40, 80, 160):
        grid, steps = make_grid_2d(-np.pi, np.pi, -np.pi, np.pi, n, n, 0.25)
        x, y, u = ctcs_solve_2d(
            lambda x, y: np.sin(x + y),
            lambda x, y: sq2 * np.cos(x + y),
            None, grid, steps)
        xx, yy = np.meshgrid(x, y, indexing="ij")
        errs.append(np.max(np.abs(u - np.sin(xx + yy + sq2 * 0.25))))
    slopes = [np.log2(errs[i] / errs[i + 1]) for i in range(2)]
    for sl in slopes:
        assert 1.8 <= sl <= 2.2


def test_nonlinear_source_runs():
    grid, steps = make_grid_1d(0.0, 1.0, 200, 0.1)
    x, u = ctcs_solve_1d(
        lambda x: np.where((x > 0.4) & (x < 0.6), 1.0, 0.0),
        lambda x: 0 * x,
        lambda u: 160.0 * np.sin(u),
        grid, steps)
    assert np.all(np.isfinite(u))
