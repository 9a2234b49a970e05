"""Method-of-lines right-hand sides: time derivatives of the evolved moments.

Pipeline per evaluation (recomputed at every RK stage): fill ghosts at the
stage time -> reconstruct point values -> solve q -> solve p -> interface
fluxes Hhat = fhat + rhat' phat -> moment derivatives.

Sweep ranges (interior cells are 0..n-1, ghost width 3):
    reconstruction on [-2, n+1], q on [-1, n+1], p on [0, n],
so every interface of every interior cell sees both one-sided states.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .basis import Basis1D, Basis2D
from .ldg import llf_flux, rprime_hat, solve_q_1d, solve_p_1d, solve_q_2d, solve_p_2d
from .mesh import GHOST, fill_ghosts_1d, fill_ghosts_2d
from .reconstruct import (ReconstructionConfig, ReconstructionTable,
                          reconstruction_table, reconstruct_range_1d,
                          reconstruct_range_2d)


class NumericalBlowupError(RuntimeError):
    """Non-finite values detected in the semidiscrete pipeline."""


def _zero(u):
    return np.zeros_like(np.asarray(u, dtype=float))


@dataclass
class QuadraticFamily1D:
    """Fast-path descriptor: f(u) = fa u^2 + fb u, r(u) = u, g(r) = gc r."""
    fa: float
    fb: float
    gc: float


@dataclass
class EquationSpec1D:
    """Callback bundle for u_t + f(u)_x + (r'(u) g(r(u)_x)_x)_x = 0.

    All callbacks must accept numpy arrays.  fprime/gprime provide the local
    wave-speed bounds for the LLF fluxes; disp_scale bounds |g' r'| for the
    time-step rule.
    """
    f: Callable
    fprime: Callable
    r: Callable
    rprime: Callable
    g: Callable
    gprime: Callable
    disp_scale: float
    family: Optional[QuadraticFamily1D] = None

    @classmethod
    def quadratic(cls, fa=0.0, fb=0.0, gc=1.0):
        """The r(u) = u, linear-g, quadratic-f family covering the catalog."""
        fa, fb, gc = float(fa), float(fb), float(gc)
        return cls(
            f=lambda u: fa * u * u + fb * u,
            fprime=lambda u: 2.0 * fa * np.asarray(u, dtype=float) + fb,
            r=lambda u: np.asarray(u, dtype=float),
            rprime=lambda u: np.ones_like(np.asarray(u, dtype=float)),
            g=lambda q: gc * np.asarray(q, dtype=float),
            gprime=lambda q: np.full_like(np.asarray(q, dtype=float), gc),
            disp_scale=abs(gc),
            family=QuadraticFamily1D(fa, fb, gc),
        )


@dataclass
class QuadraticFamily2D:
    fa1: float
    fb1: float
    fa2: float
    fb2: float
    g11c: float
    g12c: float
    g21c: float
    g22c: float


@dataclass
class EquationSpec2D:
    """Callbacks for
    u_t + f1(u)_x + f2(u)_y + [r1'(u)(g11(r1(u)_x)_x + g12(r1(u)_x)_y)]_x
                            + [r2'(u)(g21(r2(u)_y)_x + g22(r2(u)_y)_y)]_y = 0.
    """
    f1: Callable
    f2: Callable
    f1prime: Callable
    f2prime: Callable
    r1: Callable
    r2: Callable
    r1prime: Callable
    r2prime: Callable
    g11: Callable
    g12: Callable
    g21: Callable
    g22: Callable
    g11prime: Callable
    g12prime: Callable
    g21prime: Callable
    g22prime: Callable
    disp_scale: float
    family: Optional[QuadraticFamily2D] = None

    @classmethod
    def quadratic(cls, fa1=0.0, fb1=0.0, fa2=0.0, fb2=0.0,
                  g11c=0.0, g12c=0.0, g21c=0.0, g22c=0.0):
        def fquad(a, b):
            return lambda u: a * u * u + b * u
        def fquadp(a, b):
            return lambda u: 2.0 * a * np.asarray(u, dtype=float) + b
        def lin(c):
            return lambda q: c * np.asarray(q, dtype=float)
        def linp(c):
            return lambda q: np.full_like(np.asarray(q, dtype=float), c)
        ident = lambda u: np.asarray(u, dtype=float)
        one = lambda u: np.ones_like(np.asarray(u, dtype=float))
        return cls(
            f1=fquad(fa1, fb1), f2=fquad(fa2, fb2),
            f1prime=fquadp(fa1, fb1), f2prime=fquadp(fa2, fb2),
            r1=ident, r2=ident, r1prime=one, r2prime=one,
            g11=lin(g11c), g12=lin(g12c), g21=lin(g21c), g22=lin(g22c),
            g11prime=linp(g11c), g12prime=linp(g12c),
            g21prime=linp(g21c), g22prime=linp(g22c),
            disp_scale=max(abs(g11c), abs(g12c), abs(g21c), abs(g22c)),
            family=QuadraticFamily2D(fa1, fb1, fa2, fb2, g11c, g12c, g21c, g22c),
        )


class MomentField1D:
    """Evolved unknowns (ubar, vbar) on interior + ghost cells, packed as one
    (2, n + 2*GHOST) array so RK stage combinations are single expressions."""

    def __init__(self, mesh, data=None):
        self.mesh = mesh
        ntot = mesh.n + 2 * GHOST
        self.data = np.zeros((2, ntot)) if data is None else data

    @property
    def ubar(self):
        return self.data[0]

    @property
    def vbar(self):
        return self.data[1]

    def interior(self):
        W = GHOST
        return self.data[:, W:W + self.mesh.n]

    def copy(self):
        return MomentField1D(self.mesh, self.data.copy())


class MomentField2D:
    """(4, nx + 2W, ny + 2W): ubar, vbar, wbar, zbar."""

    def __init__(self, mesh, data=None):
        self.mesh = mesh
        shape = (4, mesh.nx + 2 * GHOST, mesh.ny + 2 * GHOST)
        self.data = np.zeros(shape) if data is None else data

    @property
    def ubar(self):
        return self.data[0]

    @property
    def vbar(self):
        return self.data[1]

    @property
    def wbar(self):
        return self.data[2]

    @property
    def zbar(self):
        return self.data[3]

    def interior(self):
        W = GHOST
        return self.data[:, W:W + self.mesh.nx, W:W + self.mesh.ny]

    def copy(self):
        return MomentField2D(self.mesh, self.data.copy())


@dataclass
class SolverConfig:
    """Reconstruction and pipeline options shared by 1D and 2D."""
    k: int = 2
    recon: ReconstructionConfig = field(default_factory=ReconstructionConfig)
    use_kernels: bool = True     # numba fast path when the equation is in-family
    _swap_phat_side: bool = False  # negative test: violates the opposite-side rule


def _check_finite(arr, where):
    if not np.isfinite(arr).all():
        bad = np.argwhere(~np.isfinite(arr))
        raise NumericalBlowupError(f"non-finite value in {where} at index {bad[0]}")


def rhs_1d(state, t, eq, mesh, cfg, basis=None, exact=None):
    """dState/dt for the 1D scheme; returns a MomentField1D whose ghost
    entries are zero.  `exact` supplies Dirichlet ghost data at time t."""
    if cfg.use_kernels and eq.family is not None and not cfg._swap_phat_side:
        from . import _kernels
        out = _kernels.rhs_1d_family(state, t, eq, mesh, cfg, exact)
        if out is not None:
            return out
    basis = basis or Basis1D(cfg.k)
    tab = reconstruction_table(cfg.k)
    W = GHOST
    n = mesh.n
    dx = mesh.dx
    fill_ghosts_1d((state.ubar, state.vbar), mesh, t, exact)
    # reconstruction on cells -2..n+1 -> array indices W-2..W+n+1
    lo, hi = W - 2, W + n + 1
    traces = reconstruct_range_1d(state.ubar, state.vbar, lo, hi, tab, cfg.recon)
    _check_finite(traces, "reconstruction")
    IL, IR, IG = tab.IDX_LEFT, tab.IDX_RIGHT, tab.IDX_GAUSS
    # q on cells -1..n+1: its trace input covers cells -2..n+1 (cols 0..)
    q = solve_q_1d(traces, eq, mesh, basis, -1, n + 1)
    # p on cells 0..n
    p = solve_p_1d(q, eq, mesh, basis, 0, n)
    # interface fluxes at x_{j+1/2}, j = -1..n-1
    # u-: right-edge trace of cell j (traces column j+2); u+: left edge of cell j+1
    um = traces[IR, 1:n + 2]
    up = traces[IL, 2:n + 3]
    fhat = llf_flux(eq.f, eq.fprime, um, up)
    rph = rprime_hat(eq.r, eq.rprime, um, up)
    pL = basis.phi_left @ p.coef    # p at left edge, by p-cell (cells 0..n)
    if not cfg._swap_phat_side:
        # p+ at x_{j+1/2} is cell j+1's left-edge value, j+1 = 0..n
        phat = pL[:n + 1]
    else:
        # wrong-side flux for the documented instability test: p- from cell j
        # (periodic wrap for the missing cell -1)
        pR = basis.phi_right @ p.coef
        phat = pR[np.arange(-1, n) % n]
    Hh = fhat + rph * phat
    # volume term F_j on interior cells
    uG = traces[IG:IG + cfg.k + 1, 2:n + 2]
    pG = basis.phi_gauss.T @ p.coef[:, p.offset:p.offset + n]
    Fj = dx * np.einsum('gc,g->c', eq.f(uG) + eq.rprime(uG) * pG, basis.wg)
    out = MomentField1D(mesh)
    out.data[0, W:W + n] = -(Hh[1:] - Hh[:-1]) / dx
    out.data[1, W:W + n] = -(Hh[1:] + Hh[:-1]) / (2.0 * dx) + Fj / dx ** 2
    _check_finite(out.data, "rhs_1d")
    return out


def rhs_2d(state, t, eq, mesh, cfg, basis=None, exact=None):
    """dState/dt for the 2D scheme (four moment derivatives per cell)."""
    if cfg.use_kernels and eq.family is not None and not cfg._swap_phat_side:
        from . import _kernels
        out = _kernels.rhs_2d_family(state, t, eq, mesh, cfg, exact)
        if out is not None:
            return out
    basis = basis or Basis2D(cfg.k)
    tab = reconstruction_table(cfg.k)
    W = GHOST
    nx, ny = mesh.nx, mesh.ny
    dx, dy = mesh.dx, mesh.dy
    k = cfg.k
    fill_ghosts_2d((state.ubar, state.vbar, state.wbar, state.zbar),
                   mesh, t, exact)
    # reconstruction on the block [-2, n+1] in each direction
    xlo, xhi = W - 2, W + nx + 1
    ylo, yhi = W - 2, W + ny + 1
    vals = reconstruct_range_2d(state.ubar, state.vbar, state.wbar, state.zbar,
                                xlo, xhi, ylo, yhi, tab, cfg.recon)
    _check_finite(vals, "2d reconstruction")
    IL, IR, IG = tab.IDX_LEFT, tab.IDX_RIGHT, tab.IDX_GAUSS
    gsl = slice(IG, IG + k + 1)
    # q on cells [-1, n+1]^2: pass the block extended by one cell each side
    q_rng = (-1, nx + 1, -1, ny + 1)
    q1, q2 = solve_q_2d(vals, eq, mesh, basis, q_rng)
    # p on cells [0, n]^2
    p_rng = (0, nx, 0, ny)
    p1, p2 = solve_p_2d(q1, q2, eq, mesh, basis, p_rng)
    from .ldg import _basis_edge_tables_2d, _eval_field_2d, LocalPolyField2D
    tb = _basis_edge_tables_2d(basis)
    wg = basis.b1.wg
    # --- Hhat_1 on x-interfaces x_{i+1/2}, i = -1..nx-1, interior j, gauss in y
    # u traces: minus = cell i right edge (vals x-index i+2... block origin -2)
    umx = vals[IR, gsl, 1:nx + 2, 2:ny + 2]     # (G2, nx+1, ny)
    upx = vals[IL, gsl, 2:nx + 3, 2:ny + 2]
    fh1 = llf_flux(eq.f1, eq.f1prime, umx, upx)
    rph1 = rprime_hat(eq.r1, eq.r1prime, umx, upx)
    # p1+ on x-interfaces: cell i+1 left edge; p1 covers cells 0..nx
    p1L = _eval_field_2d(p1, basis, 'xL')       # (G2, nx+1, ny+1) cells 0..nx
    ph1 = p1L[:, :, 0:ny]
    H1 = fh1 + rph1 * ph1                        # (G2, nx+1, ny)
    # --- Hhat_2 on y-interfaces, interior i, j = -1..ny-1
    umy = vals[gsl, IR, 2:nx + 2, 1:ny + 2]     # (G1, nx, ny+1)
    upy = vals[gsl, IL, 2:nx + 2, 2:ny + 3]
    fh2 = llf_flux(eq.f2, eq.f2prime, umy, upy)
    rph2 = rprime_hat(eq.r2, eq.r2prime, umy, upy)
    p2B = _eval_field_2d(p2, basis, 'yB')       # cells 0..ny in y
    ph2 = p2B[:, 0:nx, :]
    H2 = fh2 + rph2 * ph2                        # (G1, nx, ny+1)
    # --- volume H fields on interior cells
    uvol = vals[gsl, gsl, 2:nx + 2, 2:ny + 2]
    p1vol = _eval_field_2d(LocalPolyField2D(p1.coef[:, :nx, :ny], 0, 0), basis, 'vol')
    p2vol = _eval_field_2d(LocalPolyField2D(p2.coef[:, :nx, :ny], 0, 0), basis, 'vol')
    H1vol = eq.f1(uvol) + eq.r1prime(uvol) * p1vol
    H2vol = eq.f2(uvol) + eq.r2prime(uvol) * p2vol
    xg = basis.b1.xg
    # line integrals (normalized): int Hhat dy / dy  ->  sum_G H w_G etc.
    i0 = np.einsum('bij,b->ij', H1[:, 1:] - H1[:, :-1], wg)         # d/dx part of ubar
    j0 = np.einsum('aij,a->ij', H2[:, :, 1:] - H2[:, :, :-1], wg)
    i0s = np.einsum('bij,b->ij', H1[:, 1:] + H1[:, :-1], wg)
    j0s = np.einsum('aij,a->ij', H2[:, :, 1:] + H2[:, :, :-1], wg)
    i1 = np.einsum('bij,b,b->ij', H1[:, 1:] - H1[:, :-1], xg, wg)   # (y-y_j)/dy weights
    j1 = np.einsum('aij,a,a->ij', H2[:, :, 1:] - H2[:, :, :-1], xg, wg)
    i1s = np.einsum('bij,b,b->ij', H1[:, 1:] + H1[:, :-1], xg, wg)
    j1s = np.einsum('aij,a,a->ij', H2[:, :, 1:] + H2[:, :, :-1], xg, wg)
    V1 = np.einsum('abij,a,b->ij', H1vol, wg, wg)
    V2 = np.einsum('abij,a,b->ij', H2vol, wg, wg)
    V1y = np.einsum('abij,b,a,b->ij', H1vol, xg, wg, wg)
    V2x = np.einsum('abij,a,a,b->ij', H2vol, xg, wg, wg)
    out = MomentField2D(mesh)
    sl = (slice(W, W + nx), slice(W, W + ny))
    out.data[0][sl] = -i0 / dx - j0 / dy
    out.data[1][sl] = -i0s / (2 * dx) - j1 / dy + V1 / dx
    out.data[2][sl] = -i1 / dx - j0s / (2 * dy) + V2 / dy
    out.data[3][sl] = -i1s / (2 * dx) - j1s / (2 * dy) + V1y / dx + V2x / dy
    _check_finite(out.data, "rhs_2d")
    return out
