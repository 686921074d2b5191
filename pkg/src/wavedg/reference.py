"""Central-in-time, central-in-space finite difference comparator.

A second-order leapfrog scheme for u_tt = Laplacian(u) + g(u) on periodic
grids, used as the reference profile next to the DG runs on problems with
no closed-form solution.  The first step is seeded with a Taylor expansion
using the discrete Laplacian so second order is kept from the start.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FDGrid1D:
    """Periodic grid with `intervals` cells of spacing dx and time step dt."""

    a: float
    b: float
    intervals: int
    dt: float

    def __post_init__(self):
        if self.intervals < 2:
            raise ValueError("need at least two grid intervals")
        if not self.a < self.b:
            raise ValueError("degenerate domain")
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.dt > self.dx * (1.0 + 1e-12):
            raise ValueError("CFL violation: dt must not exceed dx")

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.intervals

    @property
    def points(self) -> np.ndarray:
        return self.a + self.dx * np.arange(self.intervals)


@dataclass(frozen=True)
class FDGrid2D:
    ax: float
    bx: float
    ay: float
    by: float
    nx: int
    ny: int
    dt: float

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("need at least two grid intervals per direction")
        if not (self.ax < self.bx and self.ay < self.by):
            raise ValueError("degenerate domain")
        limit = 1.0 / math.sqrt(1.0 / self.dx**2 + 1.0 / self.dy**2)
        if self.dt <= 0.0 or self.dt > limit * (1.0 + 1e-12):
            raise ValueError("CFL violation: dt must not exceed 1/sqrt(dx^-2 + dy^-2)")

    @property
    def dx(self) -> float:
        return (self.bx - self.ax) / self.nx

    @property
    def dy(self) -> float:
        return (self.by - self.ay) / self.ny

    @property
    def xpoints(self) -> np.ndarray:
        return self.ax + self.dx * np.arange(self.nx)

    @property
    def ypoints(self) -> np.ndarray:
        return self.ay + self.dy * np.arange(self.ny)


def _steps_landing_on(t_final: float, dt_target: float) -> tuple[int, float]:
    """Uniform leapfrog cannot shorten the last step, so shrink dt globally."""
    n = max(1, math.ceil(t_final / dt_target - 1e-12))
    return n, t_final / n


def make_grid_1d(a: float, b: float, intervals: int, t_final: float,
                 dt: float | None = None) -> tuple[FDGrid1D, int]:
    dx = (b - a) / intervals
    target = dt if dt is not None else 0.5 * dx
    steps, dt_eff = _steps_landing_on(t_final, target)
    return FDGrid1D(a, b, intervals, dt_eff), steps


def make_grid_2d(ax, bx, ay, by, nx, ny, t_final, dt: float | None = None) -> tuple[FDGrid2D, int]:
    dx = (bx - ax) / nx
    dy = (by - ay) / ny
    target = dt if dt is not None else 0.5 * min(dx, dy) / math.sqrt(2.0)
    steps, dt_eff = _steps_landing_on(t_final, target)
    return FDGrid2D(ax, bx, ay, by, nx, ny, dt_eff), steps


def _laplacian_1d(u: np.ndarray, dx: float) -> np.ndarray:
    return (np.roll(u, -1) - 2.0 * u + np.roll(u, 1)) / dx**2


def _laplacian_2d(u: np.ndarray, dx: float, dy: float) -> np.ndarray:
    return ((np.roll(u, -1, 0) - 2.0 * u + np.roll(u, 1, 0)) / dx**2
            + (np.roll(u, -1, 1) - 2.0 * u + np.roll(u, 1, 1)) / dy**2)


def ctcs_solve_1d(u0, u1, g, grid: FDGrid1D, steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Leapfrog solution at t = steps * dt; returns (points, values)."""
    x = grid.points
    dt, dx = grid.dt, grid.dx
    source = g if g is not None else (lambda u: 0.0)
    prev = np.asarray(u0(x), dtype=float)
    vel = np.asarray(u1(x), dtype=float)
    if np.ndim(vel) == 0:
        vel = np.full_like(prev, float(vel))
    curr = prev + dt * vel + 0.5 * dt**2 * (_laplacian_1d(prev, dx) + source(prev))
    for _ in range(steps - 1):
        nxt = 2.0 * curr - prev + dt**2 * (_laplacian_1d(curr, dx) + source(curr))
        prev, curr = curr, nxt
    return x, curr


def ctcs_solve_2d(u0, u1, g, grid: FDGrid2D, steps: int):
    """2D leapfrog with the five-point Laplacian; returns (x, y, values)."""
    x = grid.xpoints
    y = grid.ypoints
    xx, yy = np.meshgrid(x, y, indexing="ij")
    dt = grid.dt
    source = g if g is not None else (lambda u: 0.0)
    prev = np.asarray(u0(xx, yy), dtype=float)
    vel = np.asarray(u1(xx, yy), dtype=float)
    if np.ndim(vel) == 0:
        vel = np.full_like(prev, float(vel))
    curr = prev + dt * vel + 0.5 * dt**2 * (_laplacian_2d(prev, grid.dx, grid.dy) + source(prev))
    for _ in range(steps - 1):
        nxt = 2.0 * curr - prev + dt**2 * (_laplacian_2d(curr, grid.dx, grid.dy) + source(curr))
        prev, curr = curr, nxt
    return x, y, curr
