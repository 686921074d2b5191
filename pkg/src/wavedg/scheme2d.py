"""Semi-discrete right-hand side of the 2D scheme on Cartesian meshes.

Per rectangular cell the u update couples a mean constraint with
gradient-tested rows; interface coupling uses fluxes parameterized by the
weighting vector zeta = (alpha - 1/2, alpha - 1/2), an edge penalty on the
jump of u, and damping driven by squared jumps of derivatives at the four
cell vertices.  Each vertex jump compares the cell against its two
edge-neighbors sharing the faces incident to that vertex (the diagonal
neighbor is excluded).

The edge penalty is oriented the same dissipative way as in 1D: it adds
(c/h^2) * (exterior trace - interior trace) tested with the interior test
trace on every face.

Meshes must be uniform and periodic in both directions; the in-cell source
quotient treatment (chi = 1) is a 1D-only feature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .basis import derivative_matrix, gauss_rule, mass_diagonal, stiffness_matrix, vandermonde
from .field import DGField2D, n_modes, total_degree_modes
from .mesh import Mesh2D
from .scheme1d import FluxParams, SolverConfig

_CORNERS = ((-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0))  # BL, BR, TL, TR


def _fast_fluxes(v_minus, v_plus, dnu_minus, dnu_plus, params: FluxParams):
    """fluxes_2d for the positive-axis normal, with fewer temporaries."""
    z = params.zeta
    a_plus, a_minus = 0.5 - z, 0.5 + z
    vhat = a_plus * v_plus + a_minus * v_minus
    if params.tau:
        vhat += params.tau * (dnu_plus - dnu_minus)
    gradn = a_minus * dnu_plus + a_plus * dnu_minus
    if params.beta:
        gradn += params.beta * (v_plus - v_minus)
    return vhat, gradn


def fluxes_2d(v_minus, v_plus, dnu_minus, dnu_plus, params: FluxParams,
              normal_sign: float = 1.0):
    """Face flux (vhat, grad-u-hat dot n) for an axis-aligned face.

    Inputs are traces of v and of the derivative of u along the outward
    normal of the minus cell; normal_sign is that normal's sign along its
    axis (+1 when it points in the positive axis direction).  The pair is
    single-valued: evaluating from the plus side (swapped traces, negated
    normal derivatives, normal_sign flipped) reproduces vhat and negates
    the normal flux component.
    """
    z = normal_sign * params.zeta
    jump_v = np.asarray(v_plus) - np.asarray(v_minus)
    jump_dnu = np.asarray(dnu_plus) - np.asarray(dnu_minus)
    vhat = 0.5 * (v_plus + v_minus) - z * jump_v + params.tau * jump_dnu
    gradn_hat = 0.5 * (dnu_plus + dnu_minus) + z * jump_dnu + params.beta * jump_v
    return vhat, gradn_hat


@lru_cache(maxsize=None)
def _dxy_matrices(degree: int):
    """Reference mode-to-mode derivative maps on the total-degree set."""
    modes = total_degree_modes(degree)
    index = {tuple(m): i for i, m in enumerate(modes)}
    nm = len(modes)
    d1 = derivative_matrix(degree)
    dx = np.zeros((nm, nm))
    dy = np.zeros((nm, nm))
    for a, (m1, m2) in enumerate(modes):
        for k in range(m1):
            if d1[k, m1]:
                dx[index[(k, m2)], a] = d1[k, m1]
        for k in range(m2):
            if d1[k, m2]:
                dy[index[(m1, k)], a] = d1[k, m2]
    dx.setflags(write=False)
    dy.setflags(write=False)
    return dx, dy


@lru_cache(maxsize=None)
def gradient_gram(degree: int, hx: float, hy: float) -> np.ndarray:
    """G[a, b] = integral over one cell of grad(phi_b) . grad(phi_a)."""
    modes = total_degree_modes(degree)
    m = mass_diagonal(degree)
    k = stiffness_matrix(degree)
    a1, a2 = modes[:, 0], modes[:, 1]
    gx = k[np.ix_(a1, a1)] * np.where(a2[:, None] == a2[None, :], m[a2][:, None], 0.0)
    gy = np.where(a1[:, None] == a1[None, :], m[a1][:, None], 0.0) * k[np.ix_(a2, a2)]
    g = (hy / hx) * gx + (hx / hy) * gy
    g.setflags(write=False)
    return g


@lru_cache(maxsize=None)
def _corner_table(degree: int, r1: int, r2: int) -> np.ndarray:
    """Reference corner derivative values C[a, c] = d^(r1,r2) phi_a at corner c."""
    modes = total_degree_modes(degree)
    out = np.zeros((len(modes), 4))
    for c, (xi, eta) in enumerate(_CORNERS):
        vx = vandermonde(xi, degree, r1)
        vy = vandermonde(eta, degree, r2)
        out[:, c] = vx[modes[:, 0]] * vy[modes[:, 1]]
    out.setflags(write=False)
    return out


def _mm(arr: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Contract the trailing axis against a table via BLAS."""
    lead = arr.shape[:-1]
    return (arr.reshape(-1, arr.shape[-1]) @ table).reshape(lead + (table.shape[1],))


@dataclass(frozen=True)
class VertexJumpSet:
    """Squared vertex jumps per multi-index of one total order.

    squared[(a1, a2)] has shape (nx, ny, 4) with corners ordered
    (bottom-left, bottom-right, top-left, top-right); each entry sums the
    squared differences against the two edge-neighbors meeting that corner.
    """

    order: int
    squared: dict


def _corner_values(coeffs: np.ndarray, degree: int, r1: int, r2: int,
                   hx: float, hy: float) -> np.ndarray:
    table = _corner_table(degree, r1, r2)
    scale = (2.0 / hx) ** r1 * (2.0 / hy) ** r2
    return _mm(coeffs, table) * scale


@lru_cache(maxsize=None)
def _corner_major_tables(degree: int, max_order: int, hx: float, hy: float) -> tuple:
    """Per corner: derivative tables for all |alpha| <= max_order, (nm, n_alpha).

    One matmul per corner then yields contiguous per-corner value arrays.
    """
    alphas = _alphas_upto(max_order)
    out = []
    for c in range(4):
        cols = np.empty((n_modes(degree), len(alphas)))
        for k, (r1, r2) in enumerate(alphas):
            scale = (2.0 / hx) ** r1 * (2.0 / hy) ** r2
            cols[:, k] = _corner_table(degree, r1, r2)[:, c] * scale
        cols.setflags(write=False)
        out.append(cols)
    return tuple(out)


@lru_cache(maxsize=None)
def _alphas_upto(max_order: int) -> tuple:
    out = []
    for l in range(max_order + 1):
        for r1 in range(l + 1):
            out.append((r1, l - r1))
    return tuple(out)


def _corner_jump_squares(vals: np.ndarray) -> np.ndarray:
    bl, br, tl, tr = (vals[..., c] for c in range(4))
    out = np.empty_like(vals)
    out[..., 0] = (bl - np.roll(br, 1, axis=0)) ** 2 + (bl - np.roll(tl, 1, axis=1)) ** 2
    out[..., 1] = (br - np.roll(bl, -1, axis=0)) ** 2 + (br - np.roll(tr, 1, axis=1)) ** 2
    out[..., 2] = (tl - np.roll(tr, 1, axis=0)) ** 2 + (tl - np.roll(bl, -1, axis=1)) ** 2
    out[..., 3] = (tr - np.roll(tl, -1, axis=0)) ** 2 + (tr - np.roll(br, -1, axis=1)) ** 2
    return out


def vertex_jumps(field: DGField2D, order: int) -> VertexJumpSet:
    """Squared corner jumps of every derivative of the given total order."""
    if order > field.degree:
        raise ValueError("derivative order exceeds polynomial degree")
    if not field.mesh.is_uniform():
        raise ValueError("vertex jumps assume a uniform Cartesian mesh")
    hx, hy = float(field.mesh.hx[0]), float(field.mesh.hy[0])
    squared = {}
    for r1 in range(order + 1):
        r2 = order - r1
        vals = _corner_values(field.coeffs, field.degree, r1, r2, hx, hy)
        squared[(r1, r2)] = _corner_jump_squares(vals)
    return VertexJumpSet(order=order, squared=squared)


def _vertex_jump_acc(coeffs: np.ndarray, degree: int, max_order: int,
                     hx: float, hy: float) -> np.ndarray:
    """Per order l: sum over |alpha| = l of sqrt(quarter-sum of corner jumps).

    Returns shape (nx, ny, max_order+1); all multi-index corner values come
    from one stacked matmul and the four-corner jump algebra runs over every
    multi-index at once.
    """
    alphas = _alphas_upto(max_order)
    tabs = _corner_major_tables(degree, max_order, hx, hy)
    bl = _mm(coeffs, tabs[0])
    br = _mm(coeffs, tabs[1])
    tl = _mm(coeffs, tabs[2])
    tr = _mm(coeffs, tabs[3])
    br_l = np.roll(br, 1, axis=0)
    bl_r = np.roll(bl, -1, axis=0)
    tr_l = np.roll(tr, 1, axis=0)
    tl_r = np.roll(tl, -1, axis=0)
    tl_b = np.roll(tl, 1, axis=1)
    tr_b = np.roll(tr, 1, axis=1)
    bl_t = np.roll(bl, -1, axis=1)
    br_t = np.roll(br, -1, axis=1)
    total = (bl - br_l) ** 2 + (bl - tl_b) ** 2
    total += (br - bl_r) ** 2 + (br - tr_b) ** 2
    total += (tl - tr_l) ** 2 + (tl - bl_t) ** 2
    total += (tr - tl_r) ** 2 + (tr - br_t) ** 2
    roots = np.sqrt(0.25 * total)
    out = np.zeros(coeffs.shape[:-1] + (max_order + 1,))
    for k, (r1, r2) in enumerate(alphas):
        out[..., r1 + r2] += roots[..., k]
    return out


def damping_coeffs_2d(u: DGField2D, v: DGField2D, config: SolverConfig):
    """Damping weights (for_u[i,j,l], l=1..p; for_v[i,j,l], l=0..q).

    for_u at order l sums, over the multi-indices of that order, the root of
    the quarter-sum of squared vertex jumps, scaled by
    2(2l+1)/(2p-1) * h_d^l / l!; for_v uses (2q-1), h_d^(l+1) and (l+1)!.
    """
    p, q = config.p, config.q
    mesh = u.mesh
    hx, hy = float(mesh.hx[0]), float(mesh.hy[0])
    h_d = mesh.h
    acc_u = _vertex_jump_acc(u.coeffs, u.degree, p, hx, hy)
    acc_v = _vertex_jump_acc(v.coeffs, v.degree, q, hx, hy)
    for_u = np.zeros((mesh.nx, mesh.ny, p + 1))
    for_v = np.zeros((mesh.nx, mesh.ny, q + 1))
    for l in range(1, p + 1):
        for_u[..., l] = (2.0 * (2 * l + 1) / (2 * p - 1)) * h_d**l / math.factorial(l) * acc_u[..., l]
    for l in range(0, q + 1):
        for_v[..., l] = (2.0 * (2 * l + 1) / (2 * q - 1)) * h_d**(l + 1) / math.factorial(l + 1) * acc_v[..., l]
    return for_u, for_v


@lru_cache(maxsize=None)
def _tables2d(p: int, q: int, hx: float, hy: float, nq: int):
    """Face/volume trace tables, shape (nmodes, nquad), for one cell geometry."""
    modes = total_degree_modes(p)
    nmq = n_modes(q)
    rule = gauss_rule(nq)
    v0 = vandermonde(rule.nodes, p)
    one_r = vandermonde(1.0, p)
    one_l = vandermonde(-1.0, p)
    d_r = vandermonde(1.0, p, 1)
    d_l = vandermonde(-1.0, p, 1)
    m1, m2 = modes[:, 0], modes[:, 1]
    tang_x = v0[:, m1].T  # tangential factor along horizontal faces
    tang_y = v0[:, m2].T
    dx2, dy2 = _dxy_matrices(p)
    g = gradient_gram(p, hx, hy)
    mass2 = mass_diagonal(p)[m1] * mass_diagonal(p)[m2]
    basis_vol = v0[:, m1][:, None, :] * v0[:, m2][None, :, :]  # (g, h, nm)
    w2 = rule.weights[:, None] * rule.weights[None, :]
    bv_flat = basis_vol.reshape(nq * nq, -1).T  # (nm, ngh)
    bvw_q = (basis_vol * w2[:, :, None]).reshape(nq * nq, -1)[:, :nmq]  # (ngh, nmq)
    vr = one_r[m1][:, None] * tang_y
    vl = one_l[m1][:, None] * tang_y
    vrx = d_r[m1][:, None] * tang_y * (2.0 / hx)
    vlx = d_l[m1][:, None] * tang_y * (2.0 / hx)
    ht = tang_x * one_r[m2][:, None]
    hb = tang_x * one_l[m2][:, None]
    hty = tang_x * d_r[m2][:, None] * (2.0 / hy)
    hby = tang_x * d_l[m2][:, None] * (2.0 / hy)
    fw_v = rule.weights * (0.5 * hy)
    fw_h = rule.weights * (0.5 * hx)
    return {
        "modes": modes,
        "deg": m1 + m2,
        "nmq": nmq,
        "rule": rule,
        "mass2": mass2,
        "g": g,
        "ginv": np.linalg.inv(g[1:, 1:]),
        "dx2": dx2,
        "dy2": dy2,
        "vr": vr,
        "vl": vl,
        "vrx": vrx,
        "vlx": vlx,
        "ht": ht,
        "hb": hb,
        "hty": hty,
        "hby": hby,
        # stacked trace tables: one matmul per field and direction
        "u_vert": np.concatenate([vr, vl, vrx, vlx], axis=1),
        "u_horz": np.concatenate([ht, hb, hty, hby], axis=1),
        "v_vert": np.concatenate([vr, vl], axis=1),
        "v_horz": np.concatenate([ht, hb], axis=1),
        # assembly tables with face weights folded in, (nq, nm)
        "vr_w": (vr * fw_v).T.copy(),
        "vl_w": (vl * fw_v).T.copy(),
        "vrx_w": (vrx * fw_v).T.copy(),
        "vlx_w": (vlx * fw_v).T.copy(),
        "ht_w": (ht * fw_h).T.copy(),
        "hb_w": (hb * fw_h).T.copy(),
        "hty_w": (hty * fw_h).T.copy(),
        "hby_w": (hby * fw_h).T.copy(),
        "basis_vol": basis_vol,
        "bv_flat": bv_flat,
        "bvw_q": bvw_q,
    }


def _pad_modes(coeffs: np.ndarray, nm_to: int) -> np.ndarray:
    if coeffs.shape[-1] == nm_to:
        return coeffs
    out = np.zeros(coeffs.shape[:-1] + (nm_to,))
    out[..., : coeffs.shape[-1]] = coeffs
    return out


def rhs_arrays_2d(ucoef: np.ndarray, vcoef: np.ndarray, mesh: Mesh2D,
                  config: SolverConfig) -> tuple[np.ndarray, np.ndarray]:
    """Time derivatives (du, dv) of the 2D modal coefficients."""
    if not mesh.is_uniform():
        raise ValueError("the 2D scheme assumes a uniform Cartesian mesh")
    if config.boundary != "periodic":
        raise ValueError("the 2D scheme supports periodic boundaries only")
    if config.source is not None and config.chi == 1:
        raise ValueError("the in-cell source quotient treatment is 1D-only; use chi=0 in 2D")
    p, q = config.p, config.q
    hx, hy = float(mesh.hx[0]), float(mesh.hy[0])
    t = _tables2d(p, q, hx, hy, config.quad_points)
    nm = len(t["modes"])
    nmq = t["nmq"]
    fp = config.flux
    w = t["rule"].weights

    vpad = _pad_modes(vcoef, nm)

    b = _mm(vpad, t["g"])  # integral of grad v . grad phi_a

    nq_face = len(w)

    # vertical interfaces, indexed by the cell on their left; normal = +x
    u_tr = _mm(ucoef, t["u_vert"])
    v_tr = _mm(vpad, t["v_vert"])
    v_m = v_tr[..., :nq_face]
    v_own_l = v_tr[..., nq_face:]
    v_p = np.roll(v_own_l, -1, axis=0)
    u_m = u_tr[..., :nq_face]
    u_own_l = u_tr[..., nq_face:2 * nq_face]
    ux_m = u_tr[..., 2 * nq_face:3 * nq_face]
    ux_own_l = u_tr[..., 3 * nq_face:]
    ux_p = np.roll(ux_own_l, -1, axis=0)
    vhat_x, gradn_x = _fast_fluxes(v_m, v_p, ux_m, ux_p, fp)

    b += _mm(vhat_x - v_m, t["vrx_w"])
    b -= _mm(np.roll(vhat_x, 1, axis=0) - v_own_l, t["vlx_w"])

    if config.penalty and config.penalty_coefficient > 0.0:
        coef = config.penalty_coefficient / mesh.h**2
        pen = _mm(np.roll(u_own_l, -1, axis=0) - u_m, t["vr_w"])
        pen += _mm(np.roll(u_m, 1, axis=0) - u_own_l, t["vl_w"])
    else:
        pen = None

    # horizontal interfaces, indexed by the cell below; normal = +y
    u_tr = _mm(ucoef, t["u_horz"])
    v_tr = _mm(vpad, t["v_horz"])
    v_mb = v_tr[..., :nq_face]
    v_own_b = v_tr[..., nq_face:]
    v_pb = np.roll(v_own_b, -1, axis=1)
    u_mb = u_tr[..., :nq_face]
    u_own_b = u_tr[..., nq_face:2 * nq_face]
    uy_m = u_tr[..., 2 * nq_face:3 * nq_face]
    uy_own_b = u_tr[..., 3 * nq_face:]
    uy_p = np.roll(uy_own_b, -1, axis=1)
    vhat_y, gradn_y = _fast_fluxes(v_mb, v_pb, uy_m, uy_p, fp)

    b += _mm(vhat_y - v_mb, t["hty_w"])
    b -= _mm(np.roll(vhat_y, 1, axis=1) - v_own_b, t["hby_w"])

    if pen is not None:
        pen += _mm(np.roll(u_own_b, -1, axis=1) - u_mb, t["ht_w"])
        pen += _mm(np.roll(u_mb, 1, axis=1) - u_own_b, t["hb_w"])
        b += coef * pen

    sig_u = sig_v = None
    if config.damping:
        sig_u, sig_v = damping_coeffs_2d(DGField2D(mesh, p, ucoef), DGField2D(mesh, q, vcoef), config)
        h_d = mesh.h
        deg = t["deg"]
        csum_u = np.cumsum(sig_u[..., 1:], axis=-1)
        wu = np.zeros(ucoef.shape)
        nonzero = deg >= 1
        wu[..., nonzero] = csum_u[..., deg[nonzero] - 1]
        ux_ref = _mm(ucoef, t["dx2"].T)
        uy_ref = _mm(ucoef, t["dy2"].T)
        b -= (hy / hx) / h_d * _mm(wu * ux_ref * t["mass2"], t["dx2"])
        b -= (hx / hy) / h_d * _mm(wu * uy_ref * t["mass2"], t["dy2"])

    du = np.empty_like(b)
    du[..., 0] = vpad[..., 0]
    du[..., 1:] = _mm(b[..., 1:], t["ginv"])

    # v equation: mass solve over the degree-q prefix of the mode list
    rhs = -_mm(ucoef, t["g"][:, :nmq])
    rhs += _mm(gradn_x, t["vr_w"][:, :nmq])
    rhs -= _mm(np.roll(gradn_x, 1, axis=0), t["vl_w"][:, :nmq])
    rhs += _mm(gradn_y, t["ht_w"][:, :nmq])
    rhs -= _mm(np.roll(gradn_y, 1, axis=1), t["hb_w"][:, :nmq])

    if config.source is not None:
        u_at = _mm(ucoef, t["bv_flat"])
        g_at = config.source.g(u_at)
        rhs += _mm(g_at, t["bvw_q"]) * (0.25 * hx * hy)

    dv = rhs / (0.25 * hx * hy * t["mass2"][:nmq])
    if sig_v is not None:
        csum_v = np.cumsum(sig_v, axis=-1)
        deg_q = t["deg"][:nmq]
        wv = csum_v[..., deg_q]
        wv[..., deg_q == 0] = 0.0
        dv -= wv * vcoef / mesh.h
    return du, dv


def semidiscrete_rhs_2d(u: DGField2D, v: DGField2D, config: SolverConfig):
    du, dv = rhs_arrays_2d(u.coeffs, v.coeffs, u.mesh, config)
    return DGField2D(u.mesh, config.p, du), DGField2D(v.mesh, config.q, dv)
