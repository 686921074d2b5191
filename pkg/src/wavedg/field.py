"""DG coefficient storage, projection, point evaluation and interface traces.

A field stores modal Legendre coefficients per cell.  In 1D the layout is
(ncells, degree+1).  In 2D the basis is the tensor-Legendre set restricted
to total degree <= k (matching a per-cell space P^k on rectangles) and the
layout is (nx, ny, nmodes) with modes ordered by (total degree, x-degree),
so the modes of any lower total degree form a prefix of the list.

Because the basis is orthogonal, the local L2 projection onto a lower
degree is coefficient truncation, and projections are exact and cheap.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .basis import endpoint_values, gauss_rule, mass_diagonal, vandermonde
from .mesh import Mesh1D, Mesh2D


def _as_callable_values(f, x):
    """Evaluate f on array x, tolerating non-vectorized callables."""
    fx = np.asarray(f(x), dtype=float)
    if fx.shape != x.shape:
        fx = np.vectorize(f, otypes=[float])(x)
    return fx


class DGField1D:
    """Piecewise polynomial of degree k on a 1D mesh, modal coefficients."""

    def __init__(self, mesh: Mesh1D, degree: int, coeffs: np.ndarray | None = None):
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        self.mesh = mesh
        self.degree = degree
        if coeffs is None:
            coeffs = np.zeros((mesh.ncells, degree + 1))
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (mesh.ncells, degree + 1):
            raise ValueError("coefficient array shape does not match mesh/degree")
        self.coeffs = coeffs

    @classmethod
    def project(cls, f, mesh: Mesh1D, degree: int, quad_points: int | None = None) -> "DGField1D":
        """Cellwise L2 projection of a scalar function onto degree-k polynomials."""
        nq = quad_points if quad_points is not None else degree + 3
        rule = gauss_rule(nq)
        v = vandermonde(rule.nodes, degree)
        x = mesh.centers[:, None] + 0.5 * mesh.widths[:, None] * rule.nodes[None, :]
        fx = _as_callable_values(f, x)
        scale = (2.0 * np.arange(degree + 1) + 1.0) / 2.0
        coeffs = (fx * rule.weights[None, :]) @ v * scale[None, :]
        return cls(mesh, degree, coeffs)

    def copy(self) -> "DGField1D":
        return DGField1D(self.mesh, self.degree, self.coeffs.copy())

    def locate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if np.any(x < self.mesh.a - 1e-14) or np.any(x > self.mesh.b + 1e-14):
            raise ValueError("evaluation point outside domain")
        cells = np.searchsorted(self.mesh.nodes, x, side="right") - 1
        return np.clip(cells, 0, self.mesh.ncells - 1)

    def eval(self, x, order: int = 0):
        """Value of the order-th derivative at x, with chain factor (2/h_j)^order."""
        xa = np.asarray(x, dtype=float)
        cells = self.locate(xa)
        h = self.mesh.widths[cells]
        xi = 2.0 * (xa - self.mesh.centers[cells]) / h
        v = vandermonde(xi, self.degree, order)
        out = np.einsum("...m,...m->...", self.coeffs[cells], v) * (2.0 / h) ** order
        return out if xa.ndim else float(out)

    def midpoint_values(self) -> np.ndarray:
        v0 = vandermonde(0.0, self.degree)
        return self.coeffs @ v0

    def project_down(self, level: int) -> "DGField1D":
        """Local L2 projection onto degree <= level; level = -1 maps to 0."""
        if level < -1:
            raise ValueError("projection level must be >= -1")
        keep = min(max(level, 0), self.degree)
        coeffs = self.coeffs.copy()
        coeffs[:, keep + 1:] = 0.0
        return DGField1D(self.mesh, self.degree, coeffs)

    def endpoint_derivatives(self, max_order: int) -> tuple[np.ndarray, np.ndarray]:
        """(left, right)[j, r]: derivative traces at the cell endpoints of cell j."""
        el, er = endpoint_values(self.degree, max_order)
        scale = (2.0 / self.mesh.widths)[:, None] ** np.arange(max_order + 1)[None, :]
        return self.coeffs @ el.T * scale, self.coeffs @ er.T * scale

    def l2_norm(self) -> float:
        m = mass_diagonal(self.degree)
        return float(np.sqrt(np.sum(0.5 * self.mesh.widths[:, None] * m[None, :] * self.coeffs**2)))

    def to_midpoint_csv(self, path: str | os.PathLike) -> None:
        write_columns_csv(path, {"x": self.mesh.centers, "u": self.midpoint_values()})


def project_down(field: DGField1D, cell: int, level: int) -> np.ndarray:
    """Coefficients of the degree-level L2 restriction on one cell."""
    if level < -1:
        raise ValueError("projection level must be >= -1")
    keep = min(max(level, 0), field.degree)
    return field.coeffs[cell, : keep + 1].copy()


@dataclass(frozen=True)
class Traces:
    """Two-sided derivative traces at every interface, wrap/ghost included.

    minus[g, r] and plus[g, r] hold the order-r derivative limits from the
    left and right of interface g = 0..N (positions x_{1/2} .. x_{N+1/2}).
    For periodic meshes the two boundary interfaces carry identical states.
    """

    minus: np.ndarray
    plus: np.ndarray

    @property
    def max_order(self) -> int:
        return self.minus.shape[1] - 1

    def jumps(self) -> np.ndarray:
        """plus - minus at every interface."""
        return self.plus - self.minus


def mirror_ghost(interior: np.ndarray) -> np.ndarray:
    """Even-reflection ghost: order-r derivative picks up a (-1)^r sign.

    This realizes a homogeneous Neumann wall: the ghost matches the value
    and flips odd derivatives, so the centered normal-derivative flux and
    the interface jump of the value both vanish.
    """
    signs = (-1.0) ** np.arange(interior.shape[-1])
    return interior * signs


def interface_traces(field: DGField1D, max_order: int, boundary: str | None = None) -> Traces:
    """Left/right derivative limits at all N+1 interfaces of a 1D field."""
    if max_order > field.degree:
        raise ValueError("trace order exceeds polynomial degree")
    kind = boundary if boundary is not None else field.mesh.boundary
    left, right = field.endpoint_derivatives(max_order)
    n = field.mesh.ncells
    minus = np.empty((n + 1, max_order + 1))
    plus = np.empty((n + 1, max_order + 1))
    minus[1:] = right
    plus[:n] = left
    if kind == "periodic":
        minus[0] = right[-1]
        plus[n] = left[0]
    elif kind == "neumann":
        minus[0] = mirror_ghost(left[0])
        plus[n] = mirror_ghost(right[-1])
    else:
        raise ValueError(f"unsupported boundary kind {kind!r}")
    return Traces(minus=minus, plus=plus)


@lru_cache(maxsize=None)
def total_degree_modes(degree: int) -> np.ndarray:
    """Mode table [(m1, m2)] with m1+m2 <= degree, sorted by (total, m1)."""
    modes = [(m1, m2) for m2 in range(degree + 1) for m1 in range(degree + 1 - m2)]
    modes.sort(key=lambda t: (t[0] + t[1], t[0]))
    out = np.array(modes, dtype=int)
    out.setflags(write=False)
    return out


def n_modes(degree: int) -> int:
    return (degree + 1) * (degree + 2) // 2


class DGField2D:
    """Piecewise polynomial of total degree k on a Cartesian mesh."""

    def __init__(self, mesh: Mesh2D, degree: int, coeffs: np.ndarray | None = None):
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        self.mesh = mesh
        self.degree = degree
        self.modes = total_degree_modes(degree)
        if coeffs is None:
            coeffs = np.zeros((mesh.nx, mesh.ny, len(self.modes)))
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (mesh.nx, mesh.ny, len(self.modes)):
            raise ValueError("coefficient array shape does not match mesh/degree")
        self.coeffs = coeffs

    @classmethod
    def project(cls, f, mesh: Mesh2D, degree: int, quad_points: int | None = None) -> "DGField2D":
        """Cellwise L2 projection using a tensor Gauss rule per cell."""
        nq = quad_points if quad_points is not None else degree + 3
        rule = gauss_rule(nq)
        modes = total_degree_modes(degree)
        v1 = vandermonde(rule.nodes, degree)
        x = mesh.xcenters[:, None] + 0.5 * mesh.hx[:, None] * rule.nodes[None, :]
        y = mesh.ycenters[:, None] + 0.5 * mesh.hy[:, None] * rule.nodes[None, :]
        fx = np.asarray(f(x[:, None, :, None], y[None, :, None, :]), dtype=float)
        if fx.shape != (mesh.nx, mesh.ny, nq, nq):
            fx = np.broadcast_to(fx, (mesh.nx, mesh.ny, nq, nq)).copy()
        w2 = rule.weights[:, None] * rule.weights[None, :]
        basis = v1[:, modes[:, 0]][:, None, :] * v1[:, modes[:, 1]][None, :, :]
        scale = (2.0 * modes[:, 0] + 1.0) * (2.0 * modes[:, 1] + 1.0) / 4.0
        coeffs = np.einsum("xygh,ghm->xym", fx * w2[None, None], basis) * scale
        return cls(mesh, degree, coeffs)

    def copy(self) -> "DGField2D":
        return DGField2D(self.mesh, self.degree, self.coeffs.copy())

    def center_values(self) -> np.ndarray:
        v0 = vandermonde(0.0, self.degree)
        b = v0[self.modes[:, 0]] * v0[self.modes[:, 1]]
        return self.coeffs @ b

    def project_down(self, level: int) -> "DGField2D":
        """Truncate to total degree <= level; level = -1 maps to 0."""
        if level < -1:
            raise ValueError("projection level must be >= -1")
        keep = min(max(level, 0), self.degree)
        coeffs = self.coeffs.copy()
        total = self.modes.sum(axis=1)
        coeffs[..., total > keep] = 0.0
        return DGField2D(self.mesh, self.degree, coeffs)

    def eval(self, x, y, orders: tuple[int, int] = (0, 0)):
        """Pointwise derivative d^orders field at (x, y) inside the domain."""
        xa = np.asarray(x, dtype=float)
        ya = np.asarray(y, dtype=float)
        mesh = self.mesh
        if (np.any(xa < mesh.xnodes[0] - 1e-14) or np.any(xa > mesh.xnodes[-1] + 1e-14)
                or np.any(ya < mesh.ynodes[0] - 1e-14) or np.any(ya > mesh.ynodes[-1] + 1e-14)):
            raise ValueError("evaluation point outside domain")
        ix = np.clip(np.searchsorted(mesh.xnodes, xa, side="right") - 1, 0, mesh.nx - 1)
        iy = np.clip(np.searchsorted(mesh.ynodes, ya, side="right") - 1, 0, mesh.ny - 1)
        hx, hy = mesh.hx[ix], mesh.hy[iy]
        xi = 2.0 * (xa - mesh.xcenters[ix]) / hx
        eta = 2.0 * (ya - mesh.ycenters[iy]) / hy
        vx = vandermonde(xi, self.degree, orders[0])
        vy = vandermonde(eta, self.degree, orders[1])
        b = vx[..., self.modes[:, 0]] * vy[..., self.modes[:, 1]]
        out = np.einsum("...m,...m->...", self.coeffs[ix, iy], b)
        out = out * (2.0 / hx) ** orders[0] * (2.0 / hy) ** orders[1]
        return out if xa.ndim else float(out)

    def l2_norm(self) -> float:
        m = mass_diagonal(self.degree)
        w = m[self.modes[:, 0]] * m[self.modes[:, 1]]
        vol = 0.25 * self.mesh.hx[:, None, None] * self.mesh.hy[None, :, None]
        return float(np.sqrt(np.sum(vol * w[None, None, :] * self.coeffs**2)))

    def to_center_csv(self, path: str | os.PathLike) -> None:
        """Long-format grid of cell-center values, columns x,y,u."""
        u = self.center_values()
        xs = np.repeat(self.mesh.xcenters, self.mesh.ny)
        ys = np.tile(self.mesh.ycenters, self.mesh.nx)
        write_columns_csv(path, {"x": xs, "y": ys, "u": u.ravel()})


def write_columns_csv(path: str | os.PathLike, columns: dict[str, np.ndarray]) -> None:
    """Write named columns in full-precision scientific notation."""
    names = list(columns)
    data = np.column_stack([np.asarray(columns[k], dtype=float) for k in names])
    with open(path, "w") as fh:
        fh.write(",".join(names) + "\n")
        for row in data:
            fh.write(",".join(f"{val:.17e}" for val in row) + "\n")
