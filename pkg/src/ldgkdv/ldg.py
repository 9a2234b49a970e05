"""Numerical fluxes and the per-cell local solves for the auxiliary variables
q (~ r(u)_x) and p (~ g(q)_x), in 1D and 2D.

Flux pattern (ensures accuracy and stability): rhat is one-sided from the
minus side, phat from the plus side (opposite sides are required), fhat and
ghat are local Lax-Friedrichs with ghat's monotonicity reversed.  The basis
is orthogonal, so every local solve is an explicit division by the diagonal
mass entries.
"""
from __future__ import annotations

import numpy as np

from .mesh import GHOST

DD_EPS = 1e-12   # divided-difference threshold in rhat'


def llf_flux(f, fprime, a, b):
    """fhat(a,b) = [f(a)+f(b) - alpha (b-a)]/2, alpha = max |f'| on [min,max].

    alpha uses endpoint evaluation of fprime; exact whenever f' is monotone
    between the traces (true for every flux in the catalog).
    """
    alpha = np.maximum(np.abs(fprime(a)), np.abs(fprime(b)))
    return 0.5 * (f(a) + f(b) - alpha * (b - a))


def llf_flux_g(g, gprime, c, d):
    """ghat(c,d) = [g(c)+g(d) - alpha (c-d)]/2: reversed monotonicity
    (non-increasing in c, non-decreasing in d)."""
    alpha = np.maximum(np.abs(gprime(c)), np.abs(gprime(d)))
    return 0.5 * (g(c) + g(d) - alpha * (c - d))


def rprime_hat(r, rprime, u_minus, u_plus):
    """Divided difference (r(u+) - r(u-))/(u+ - u-), with the analytic
    derivative at the midpoint when the traces (nearly) coincide."""
    um = np.asarray(u_minus, dtype=float)
    up = np.asarray(u_plus, dtype=float)
    du = up - um
    near = np.abs(du) < DD_EPS
    safe = np.where(near, 1.0, du)
    dd = (r(up) - r(um)) / safe
    return np.where(near, rprime(0.5 * (um + up)), dd)


class LocalPolyField1D:
    """Per-cell polynomial coefficients in the orthogonal basis, stored as
    (k+1, ncells) with an index offset: column (j + offset) is cell j."""

    def __init__(self, coef, offset):
        self.coef = coef
        self.offset = offset

    def col(self, j):
        return self.coef[:, j + self.offset]

    def eval_at(self, j, basis_values):
        """Value at a point given [phi_0..phi_k] there."""
        return basis_values @ self.col(j)


def solve_q_1d(traces, eq, mesh, basis, lo, hi):
    """LDG solve for q_h ~ r(u)_x on cells lo..hi (interior indices; may
    extend into ghosts).

    traces: (npts, ncols) reconstruction output covering cells lo-1..hi
    (column c of `traces` is cell lo-1+c).  Weak form per test function:
      dx m_l q^(l) = -sum_G r(u(x_G)) phi_l'(xi_G) w_G
                     + rhat_R phi_l(1/2) - rhat_L phi_l(-1/2),
    with rhat = r(u^-) one-sided from the left of each interface.
    """
    from .reconstruct import ReconstructionTable
    IR = ReconstructionTable.IDX_RIGHT
    IG = ReconstructionTable.IDX_GAUSS
    k = basis.k
    r = eq.r
    ncells = hi - lo + 1
    uG = traces[IG:IG + k + 1, 1:1 + ncells]
    vol = np.einsum('gc,lg,g->lc', r(uG), basis.dphi_gauss, basis.wg)
    rhat_R = r(traces[IR, 1:1 + ncells])
    rhat_L = r(traces[IR, 0:ncells])
    num = -(vol - np.multiply.outer(basis.phi_right, rhat_R)
            + np.multiply.outer(basis.phi_left, rhat_L))
    coef = num / (mesh.dx * basis.norms[:, None])
    return LocalPolyField1D(coef, -lo)


def solve_p_1d(q_field, eq, mesh, basis, lo, hi):
    """LDG solve for p_h ~ g(q)_x on cells lo..hi given q_h on lo-1..hi+1.

    ghat at each interface is the reversed-LLF flux of the q traces from both
    sides.
    """
    k = basis.k
    g, gp = eq.g, eq.gprime
    q = q_field.coef
    o = q_field.offset
    qR = basis.phi_right @ q
    qL = basis.phi_left @ q
    qG = basis.phi_gauss.T @ q
    # interfaces x_{j+1/2} for j = lo-1..hi: minus side cell j, plus side j+1
    jm = np.arange(lo - 1, hi + 1) + o
    ghat = llf_flux_g(g, gp, qR[jm], qL[jm + 1])
    cols = np.arange(lo, hi + 1) + o
    vol = np.einsum('gc,lg,g->lc', g(qG[:, cols]), basis.dphi_gauss, basis.wg)
    num = -(vol - np.multiply.outer(basis.phi_right, ghat[1:])
            + np.multiply.outer(basis.phi_left, ghat[:-1]))
    coef = num / (mesh.dx * basis.norms[:, None])
    return LocalPolyField1D(coef, -lo)


class LocalPolyField2D:
    """(nb, ncx, ncy) coefficients with per-axis offsets."""

    def __init__(self, coef, ox, oy):
        self.coef = coef
        self.ox = ox
        self.oy = oy

    def col(self, i, j):
        return self.coef[:, i + self.ox, j + self.oy]


def _basis_edge_tables_2d(basis):
    """Values of the 2D basis on cell edges and at tensor Gauss points
    (cached on the basis object)."""
    cached = getattr(basis, "_edge_tables", None)
    if cached is not None:
        return cached
    b1 = basis.b1
    k = basis.k
    phg = b1.phi_gauss          # (k+1, nG) 1D values at gauss
    dphg = b1.dphi_gauss
    phR, phL = b1.phi_right, b1.phi_left
    ax, ay = basis.ax, basis.ay
    # tensor tables: [l, G1, G2]
    phi_vol = phg[ax][:, :, None] * phg[ay][:, None, :]
    dphix_vol = dphg[ax][:, :, None] * phg[ay][:, None, :]
    dphiy_vol = phg[ax][:, :, None] * dphg[ay][:, None, :]
    # x-edges: [l, G2] at xi=+-1/2, eta=gauss
    phi_xR = phR[ax][:, None] * phg[ay]
    phi_xL = phL[ax][:, None] * phg[ay]
    # y-edges: [l, G1]
    phi_yT = phg[ax] * phR[ay][:, None]
    phi_yB = phg[ax] * phL[ay][:, None]
    tb = dict(phi_vol=phi_vol, dphix_vol=dphix_vol, dphiy_vol=dphiy_vol,
              phi_xR=phi_xR, phi_xL=phi_xL, phi_yT=phi_yT, phi_yB=phi_yB)
    basis._edge_tables = tb
    return tb


def solve_q_2d(values, eq, mesh, basis, ranges):
    """LDG solves for q_1 ~ r_1(u)_x and q_2 ~ r_2(u)_y.

    values: (npts_x, npts_y, ncx, ncy) reconstructed u covering the cell block
    given by ranges = (xlo, xhi, ylo, yhi) EXTENDED by one cell on each side
    (the array's [0,0] cell is (xlo-1, ylo-1)).
    Volume integrals use the tensor (k+1)^2 rule; line integrals the (k+1) rule.
    """
    from .reconstruct import ReconstructionTable
    IL, IR, IG = (ReconstructionTable.IDX_LEFT, ReconstructionTable.IDX_RIGHT,
                  ReconstructionTable.IDX_GAUSS)
    xlo, xhi, ylo, yhi = ranges
    k = basis.k
    tb = _basis_edge_tables_2d(basis)
    wg = basis.b1.wg
    ncx, ncy = xhi - xlo + 1, yhi - ylo + 1
    sx, sy = slice(1, 1 + ncx), slice(1, 1 + ncy)
    gsl = slice(IG, IG + k + 1)
    uvol = values[gsl, gsl, sx, sy]                        # (G1, G2, ncx, ncy)
    # q1: x-direction derivative of r1(u)
    r1v = eq.r1(uvol)
    vol1 = np.einsum('abij,lab,a,b->lij', r1v, tb['dphix_vol'], wg, wg)
    # rhat_1 = r1(u^-) on x-edges: minus side of interface x_{i+1/2} is cell i's right edge
    uxR = values[IR, gsl, :, sy]                           # (G2, ncx+2, ncy) cell right-edge
    r_xR = eq.r1(uxR)
    line_R = np.einsum('bij,lb,b->lij', r_xR[:, sx], tb['phi_xR'], wg)
    line_L = np.einsum('bij,lb,b->lij', r_xR[:, 0:ncx], tb['phi_xL'], wg)
    num1 = -(vol1 - line_R + line_L)
    q1 = num1 / (mesh.dx * basis.norms[:, None, None])
    # q2: y-direction derivative of r2(u)
    r2v = eq.r2(uvol)
    vol2 = np.einsum('abij,lab,a,b->lij', r2v, tb['dphiy_vol'], wg, wg)
    uyT = values[gsl, IR, sx, :]                           # (G1, ncx, ncy+2) cell top-edge
    r_yT = eq.r2(uyT)
    line_T = np.einsum('aij,la,a->lij', r_yT[:, :, sy], tb['phi_yT'], wg)
    line_B = np.einsum('aij,la,a->lij', r_yT[:, :, 0:ncy], tb['phi_yB'], wg)
    num2 = -(vol2 - line_T + line_B)
    q2 = num2 / (mesh.dy * basis.norms[:, None, None])
    ox, oy = -xlo, -ylo
    return LocalPolyField2D(q1, ox, oy), LocalPolyField2D(q2, ox, oy)


def _eval_field_2d(field, basis, which):
    """Evaluate a 2D coefficient field on edges/volume points.

    which: 'xR', 'xL', 'yT', 'yB' (edge lines at Gauss points) or 'vol'.
    Returns arrays with leading Gauss axes matching the tables.
    """
    tb = _basis_edge_tables_2d(basis)
    c = field.coef
    if which == 'vol':
        return np.einsum('lab,lij->abij', tb['phi_vol'], c)
    key = {'xR': 'phi_xR', 'xL': 'phi_xL', 'yT': 'phi_yT', 'yB': 'phi_yB'}[which]
    return np.einsum('lg,lij->gij', tb[key], c)


def solve_p_2d(q1, q2, eq, mesh, basis, ranges):
    """LDG solves for p_1 = g11(q1)_x + g12(q1)_y and
    p_2 = g21(q2)_x + g22(q2)_y on the block `ranges`; q1/q2 must cover one
    extra cell on every side."""
    xlo, xhi, ylo, yhi = ranges
    k = basis.k
    tb = _basis_edge_tables_2d(basis)
    wg = basis.b1.wg
    nx, ny = xhi - xlo + 1, yhi - ylo + 1

    def solve_one(qf, gx, gxp, gy, gyp):
        ox, oy = qf.ox, qf.oy
        cx = slice(xlo + ox, xhi + 1 + ox)
        cy = slice(ylo + oy, yhi + 1 + oy)
        cx1 = slice(xlo - 1 + ox, xhi + 2 + ox)
        cy1 = slice(ylo - 1 + oy, yhi + 2 + oy)
        qxR = _eval_field_2d(LocalPolyField2D(qf.coef[:, cx1, cy], 0, 0), basis, 'xR')
        qxL = _eval_field_2d(LocalPolyField2D(qf.coef[:, cx1, cy], 0, 0), basis, 'xL')
        qyT = _eval_field_2d(LocalPolyField2D(qf.coef[:, cx, cy1], 0, 0), basis, 'yT')
        qyB = _eval_field_2d(LocalPolyField2D(qf.coef[:, cx, cy1], 0, 0), basis, 'yB')
        qvol = _eval_field_2d(LocalPolyField2D(qf.coef[:, cx, cy], 0, 0), basis, 'vol')
        # x-interface fluxes: minus = cell i right edge, plus = cell i+1 left edge
        ghx = llf_flux_g(gx, gxp, qxR[:, :nx + 1], qxL[:, 1:nx + 2])  # (G2, nx+1, ny)
        # y-interface fluxes
        ghy = llf_flux_g(gy, gyp, qyT[:, :, :ny + 1], qyB[:, :, 1:ny + 2])
        volx = np.einsum('abij,lab,a,b->lij', gx(qvol), tb['dphix_vol'], wg, wg)
        voly = np.einsum('abij,lab,a,b->lij', gy(qvol), tb['dphiy_vol'], wg, wg)
        linex = (np.einsum('bij,lb,b->lij', ghx[:, 1:], tb['phi_xR'], wg)
                 - np.einsum('bij,lb,b->lij', ghx[:, :-1], tb['phi_xL'], wg)) / mesh.dx
        liney = (np.einsum('aij,la,a->lij', ghy[:, :, 1:], tb['phi_yT'], wg)
                 - np.einsum('aij,la,a->lij', ghy[:, :, :-1], tb['phi_yB'], wg)) / mesh.dy
        num = -(volx / mesh.dx + voly / mesh.dy - linex - liney)
        return LocalPolyField2D(num / basis.norms[:, None, None], -xlo, -ylo)

    p1 = solve_one(q1, eq.g11, eq.g11prime, eq.g12, eq.g12prime)
    p2 = solve_one(q2, eq.g21, eq.g21prime, eq.g22, eq.g22prime)
    return p1, p2
