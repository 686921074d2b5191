"""Error norms, discrete energies, convergence-rate fits, oscillation metrics.

The quadratic energy is the undivided form integral(u_x^2 + v^2) (gradient
form in 2D).  When a source term is supplied, the reported energy switches
to the halved quadratic part plus the integral of the source antiderivative;
run metadata records which normalization was used.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .basis import derivative_matrix, gauss_rule, mass_diagonal, vandermonde
from .field import DGField1D, DGField2D, write_columns_csv


def _quad_values_1d(fld: DGField1D, nq: int):
    rule = gauss_rule(nq)
    v = vandermonde(rule.nodes, fld.degree)
    x = fld.mesh.centers[:, None] + 0.5 * fld.mesh.widths[:, None] * rule.nodes[None, :]
    vals = fld.coeffs @ v.T
    return x, vals, rule


def l2_error(fld, exact, quad_points: int | None = None) -> float:
    """L2 norm of (field - exact) by per-cell Gauss quadrature."""
    nq = quad_points if quad_points is not None else fld.degree + 5
    if isinstance(fld, DGField1D):
        x, vals, rule = _quad_values_1d(fld, nq)
        diff = vals - np.asarray(exact(x), dtype=float)
        return float(np.sqrt(np.sum(
            0.5 * fld.mesh.widths[:, None] * rule.weights[None, :] * diff**2)))
    if isinstance(fld, DGField2D):
        mesh = fld.mesh
        rule = gauss_rule(nq)
        v1 = vandermonde(rule.nodes, fld.degree)
        modes = fld.modes
        basis = v1[:, modes[:, 0]][:, None, :] * v1[:, modes[:, 1]][None, :, :]
        x = mesh.xcenters[:, None] + 0.5 * mesh.hx[:, None] * rule.nodes[None, :]
        y = mesh.ycenters[:, None] + 0.5 * mesh.hy[:, None] * rule.nodes[None, :]
        vals = np.einsum("xym,ghm->xygh", fld.coeffs, basis)
        diff = vals - np.asarray(exact(x[:, None, :, None], y[None, :, None, :]), dtype=float)
        w2 = rule.weights[:, None] * rule.weights[None, :]
        vol = 0.25 * mesh.hx[:, None] * mesh.hy[None, :]
        return float(np.sqrt(np.sum(vol[:, :, None, None] * w2[None, None] * diff**2)))
    raise TypeError("l2_error expects a DG field")


def gradient_l2_error(fld, exact_dx, exact_dy=None, quad_points: int | None = None) -> float:
    """L2 norm of the gradient error (derivative error in 1D)."""
    nq = quad_points if quad_points is not None else fld.degree + 5
    if isinstance(fld, DGField1D):
        rule = gauss_rule(nq)
        v1 = vandermonde(rule.nodes, fld.degree, 1)
        x = fld.mesh.centers[:, None] + 0.5 * fld.mesh.widths[:, None] * rule.nodes[None, :]
        vals = (fld.coeffs @ v1.T) * (2.0 / fld.mesh.widths)[:, None]
        diff = vals - np.asarray(exact_dx(x), dtype=float)
        return float(np.sqrt(np.sum(
            0.5 * fld.mesh.widths[:, None] * rule.weights[None, :] * diff**2)))
    if isinstance(fld, DGField2D):
        if exact_dy is None:
            raise ValueError("2D gradient error needs exact_dy")
        mesh = fld.mesh
        rule = gauss_rule(nq)
        v0 = vandermonde(rule.nodes, fld.degree)
        v1 = vandermonde(rule.nodes, fld.degree, 1)
        modes = fld.modes
        bx = v1[:, modes[:, 0]][:, None, :] * v0[:, modes[:, 1]][None, :, :]
        by = v0[:, modes[:, 0]][:, None, :] * v1[:, modes[:, 1]][None, :, :]
        x = mesh.xcenters[:, None] + 0.5 * mesh.hx[:, None] * rule.nodes[None, :]
        y = mesh.ycenters[:, None] + 0.5 * mesh.hy[:, None] * rule.nodes[None, :]
        ux = np.einsum("xym,ghm->xygh", fld.coeffs, bx) * (2.0 / mesh.hx)[:, None, None, None]
        uy = np.einsum("xym,ghm->xygh", fld.coeffs, by) * (2.0 / mesh.hy)[None, :, None, None]
        dx = ux - np.asarray(exact_dx(x[:, None, :, None], y[None, :, None, :]), dtype=float)
        dy = uy - np.asarray(exact_dy(x[:, None, :, None], y[None, :, None, :]), dtype=float)
        w2 = rule.weights[:, None] * rule.weights[None, :]
        vol = 0.25 * mesh.hx[:, None] * mesh.hy[None, :]
        return float(np.sqrt(np.sum(vol[:, :, None, None] * w2[None, None] * (dx**2 + dy**2))))
    raise TypeError("gradient_l2_error expects a DG field")


def _gradient_energy_1d(u: DGField1D) -> float:
    d = derivative_matrix(u.degree)
    du = u.coeffs @ d.T
    inv = 1.0 / (2.0 * np.arange(u.degree + 1) + 1.0)
    return float(np.sum(4.0 / u.mesh.widths[:, None] * du**2 * inv[None, :]))


def _l2_sq_1d(v: DGField1D) -> float:
    m = mass_diagonal(v.degree)
    return float(np.sum(0.5 * v.mesh.widths[:, None] * m[None, :] * v.coeffs**2))


def _gradient_energy_2d(u: DGField2D) -> float:
    from .scheme2d import gradient_gram

    if not u.mesh.is_uniform():
        raise ValueError("2D energy assumes a uniform Cartesian mesh")
    g = gradient_gram(u.degree, float(u.mesh.hx[0]), float(u.mesh.hy[0]))
    return float(np.einsum("xya,ab,xyb->", u.coeffs, g, u.coeffs))


def _l2_sq_2d(v: DGField2D) -> float:
    m = mass_diagonal(v.degree)
    w = m[v.modes[:, 0]] * m[v.modes[:, 1]]
    vol = 0.25 * v.mesh.hx[:, None, None] * v.mesh.hy[None, :, None]
    return float(np.sum(vol * w[None, None, :] * v.coeffs**2))


def _source_integral(u, source, quad_points: int | None = None) -> float:
    nq = quad_points if quad_points is not None else u.degree + 3
    if isinstance(u, DGField1D):
        _, vals, rule = _quad_values_1d(u, nq)
        g = source.antiderivative_G(vals)
        return float(np.sum(0.5 * u.mesh.widths[:, None] * rule.weights[None, :] * g))
    mesh = u.mesh
    rule = gauss_rule(nq)
    v1 = vandermonde(rule.nodes, u.degree)
    basis = v1[:, u.modes[:, 0]][:, None, :] * v1[:, u.modes[:, 1]][None, :, :]
    vals = np.einsum("xym,ghm->xygh", u.coeffs, basis)
    g = source.antiderivative_G(vals)
    w2 = rule.weights[:, None] * rule.weights[None, :]
    vol = 0.25 * mesh.hx[:, None] * mesh.hy[None, :]
    return float(np.sum(vol[:, :, None, None] * w2[None, None] * g))


def energy(u, v, source=None) -> float:
    """Discrete energy of the pair (u, v).

    Without a source: integral(u_x^2 + v^2) (gradient form in 2D, no 1/2).
    With a source: 0.5 * integral(v^2 + u_x^2) + integral(G(u)), where G is
    the source antiderivative supplied by the source descriptor.
    """
    if isinstance(u, DGField1D):
        quad = _gradient_energy_1d(u) + _l2_sq_1d(v)
    elif isinstance(u, DGField2D):
        quad = _gradient_energy_2d(u) + _l2_sq_2d(v)
    else:
        raise TypeError("energy expects DG fields")
    if source is None:
        return quad
    return 0.5 * quad + _source_integral(u, source)


@dataclass
class ConvergenceTable:
    """Refinement study: cell counts, mesh sizes, errors, optional extras."""

    ns: list
    hs: list
    errors: list
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (len(self.ns) == len(self.hs) == len(self.errors)):
            raise ValueError("table columns must have equal lengths")
        if any(n2 <= n1 for n1, n2 in zip(self.ns, self.ns[1:])):
            raise ValueError("cell counts must be strictly increasing")

    @property
    def saturated(self) -> bool:
        return any(e == 0.0 for e in self.errors)

    def pairwise_slopes(self) -> list:
        out = []
        for (h1, e1), (h2, e2) in zip(zip(self.hs, self.errors), zip(self.hs[1:], self.errors[1:])):
            if e1 <= 0.0 or e2 <= 0.0:
                out.append(float("nan"))
            else:
                out.append(float(np.log(e1 / e2) / np.log(h1 / h2)))
        return out

    def least_squares_slope(self) -> float:
        hs = np.asarray(self.hs)
        es = np.asarray(self.errors)
        ok = es > 0.0
        if ok.sum() < 2:
            return float("nan")
        return float(np.polyfit(np.log(hs[ok]), np.log(es[ok]), 1)[0])

    def write_csv(self, path: str | os.PathLike) -> None:
        slopes = [float("nan")] + self.pairwise_slopes()
        cols = {
            "n": np.asarray(self.ns, dtype=float),
            "h": np.asarray(self.hs, dtype=float),
            "error": np.asarray(self.errors, dtype=float),
            "slope": np.asarray(slopes, dtype=float),
        }
        for name, vals in self.extras.items():
            cols[name] = np.asarray(vals, dtype=float)
        write_columns_csv(path, cols)


def fit_rates(table: ConvergenceTable):
    """(pairwise slopes, least-squares slope); zero errors report as nan."""
    return table.pairwise_slopes(), table.least_squares_slope()


@dataclass(frozen=True)
class OscillationReport:
    """Overshoot/undershoot against known solution bounds, plus total variation."""

    overshoot: float
    undershoot: float
    total_variation: float

    def as_dict(self) -> dict:
        return {
            "overshoot": self.overshoot,
            "undershoot": self.undershoot,
            "total_variation": self.total_variation,
        }


def oscillation_metrics(values, lower: float, upper: float) -> OscillationReport:
    """Excess of midpoint samples beyond [lower, upper] and their variation."""
    if isinstance(values, DGField1D):
        values = values.midpoint_values()
    vals = np.asarray(values, dtype=float)
    over = max(0.0, float(vals.max()) - upper)
    under = max(0.0, lower - float(vals.min()))
    tv = float(np.sum(np.abs(np.diff(vals))))
    return OscillationReport(overshoot=over, undershoot=under, total_variation=tv)


def level_crossings(x, u, level: float, band: float = 0.0) -> np.ndarray:
    """Positions where the sampled profile crosses `level` (linear interp).

    With band > 0 the detector uses hysteresis: a crossing registers only
    when the profile swings from below level-band to above level+band (or
    back), so plateau wiggles straddling the level do not count as fronts.
    The reported position is where the swing passes the level itself.
    """
    x = np.asarray(x, dtype=float)
    s = np.asarray(u, dtype=float) - level
    if band <= 0.0:
        out = []
        for i in range(len(s) - 1):
            if s[i] == 0.0:
                out.append(x[i])
            elif s[i] * s[i + 1] < 0.0:
                frac = s[i] / (s[i] - s[i + 1])
                out.append(x[i] + frac * (x[i + 1] - x[i]))
        if len(s) and s[-1] == 0.0:
            out.append(x[-1])
        return np.asarray(out)
    out = []
    state = 0
    for i, val in enumerate(s):
        if state == 0:
            state = -1 if val < 0.0 else 1
            continue
        if state < 0 and val >= band:
            j = i
            while j > 0 and s[j - 1] > 0.0:
                j -= 1
            if j > 0:
                frac = s[j - 1] / (s[j - 1] - s[j])
                out.append(x[j - 1] + frac * (x[j] - x[j - 1]))
            state = 1
        elif state > 0 and val <= -band:
            j = i
            while j > 0 and s[j - 1] < 0.0:
                j -= 1
            if j > 0:
                frac = s[j - 1] / (s[j - 1] - s[j])
                out.append(x[j - 1] + frac * (x[j] - x[j - 1]))
            state = -1
    return np.asarray(out)


def bin_average(x_fine, u_fine, edges) -> np.ndarray:
    """Average a fine profile over the cells bounded by `edges`.

    Collapses a finer comparator grid onto the coarse cell layout so both
    profiles are compared at the same resolution.
    """
    x_fine = np.asarray(x_fine, dtype=float)
    edges = np.asarray(edges, dtype=float)
    idx = np.clip(np.searchsorted(edges, x_fine, side="right") - 1, 0, len(edges) - 2)
    sums = np.bincount(idx, weights=np.asarray(u_fine, dtype=float), minlength=len(edges) - 1)
    cnts = np.bincount(idx, minlength=len(edges) - 1)
    return sums / np.maximum(cnts, 1)


def merge_close(positions, tol: float) -> np.ndarray:
    """Collapse clusters of crossings closer than tol into their means.

    A dispersive comparator can wiggle through the detection level near a
    front; merging turns each wiggle packet back into one front position.
    """
    pos = np.sort(np.asarray(positions, dtype=float))
    if len(pos) == 0:
        return pos
    groups = [[pos[0]]]
    for pnt in pos[1:]:
        if pnt - groups[-1][-1] < tol:
            groups[-1].append(pnt)
        else:
            groups.append([pnt])
    return np.asarray([float(np.mean(g)) for g in groups])


@dataclass(frozen=True)
class FrontComparison:
    level: float
    reference_fronts: np.ndarray
    test_fronts: np.ndarray
    max_offset: float
    matches: bool

    def as_dict(self) -> dict:
        return {
            "level": self.level,
            "reference_fronts": list(map(float, self.reference_fronts)),
            "test_fronts": list(map(float, self.test_fronts)),
            "max_offset": self.max_offset,
            "matches": self.matches,
        }


def compare_front_positions(x_ref, u_ref, x_test, u_test, coarse_h: float,
                            level: float | None = None, merge_factor: float = 1.5,
                            match_factor: float = 2.0,
                            band_fraction: float = 0.15) -> FrontComparison:
    """Match half-height crossing positions of two profiles.

    The level defaults to the mid-range of the reference profile; crossings
    are extracted with a hysteresis band of band_fraction times the
    reference's range, so comparator ringing on a plateau near the level is
    not read as extra fronts.  Crossings closer than merge_factor * coarse_h
    collapse to one front; the profiles agree when front counts match and
    every paired offset stays within match_factor * coarse_h.
    """
    u_ref = np.asarray(u_ref, dtype=float)
    if level is None:
        level = 0.5 * (float(u_ref.max()) + float(u_ref.min()))
    band = band_fraction * (float(u_ref.max()) - float(u_ref.min()))
    fr = merge_close(level_crossings(x_ref, u_ref, level, band), merge_factor * coarse_h)
    ft = merge_close(level_crossings(x_test, u_test, level, band), merge_factor * coarse_h)
    if len(fr) != len(ft) or len(fr) == 0:
        offset = float("inf") if len(fr) != len(ft) else 0.0
        return FrontComparison(level, fr, ft, offset, len(fr) == len(ft))
    offset = float(np.max(np.abs(fr - ft)))
    return FrontComparison(level, fr, ft, offset, offset <= match_factor * coarse_h)
