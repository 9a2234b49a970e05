"""Hermite-WENO reconstruction of point values from cell averages and first
moments over the 3-cell stencil {j-1, j, j+1}.

The moment data per cell j are
    ubar_j = (1/dx) int_{I_j} u dx,
    vbar_j = (1/dx) int_{I_j} u (x - x_j)/dx dx,
and a point value u(xhat) (xhat in the reference cell of j) is built from the
six values (ubar_{j-1}, ubar_j, ubar_{j+1}, vbar_{j-1}, vbar_j, vbar_{j+1}):

  1. three cubics p_0, p_1, p_2 and one quintic Q, each matching a subset of
     the moment conditions (every cell's moment taken about its own center);
  2. smoothness indicators beta_i, a closed quadratic form in the cubic
     coefficients;
  3. point-dependent linear weights gamma_i with Q(xhat) = sum gamma_i p_i(xhat)
     for all data, split into positive/negative groups where needed;
  4. nonlinear weights w_i ~ gamma_i/(lam + beta_i)^2, normalized;
  5. u(xhat) = sum w_i p_i(xhat), combining split groups as s+ R+ - s- R-.

All stencil systems are solved once in exact rational arithmetic; gamma at
rational points (the interfaces) stays an exact Fraction.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .basis import gauss_rule

# stencil definitions: which (average, moment) conditions each polynomial matches;
# entries are ('avg'|'mom', cell offset l)
STENCIL_CONDITIONS = {
    0: (('avg', -1), ('avg', 0), ('mom', -1), ('mom', 0)),
    1: (('avg', 0), ('avg', 1), ('mom', 0), ('mom', 1)),
    2: (('avg', -1), ('avg', 0), ('avg', 1), ('mom', 0)),
}
QUINTIC_CONDITIONS = (('avg', -1), ('avg', 0), ('avg', 1),
                      ('mom', -1), ('mom', 0), ('mom', 1))

# index of each condition's datum in the canonical 6-vector
# (ubar_{j-1}, ubar_j, ubar_{j+1}, vbar_{j-1}, vbar_j, vbar_{j+1})
def _moment_slot(kind, l):
    return (l + 1) if kind == 'avg' else (4 + l)


def _int_avg(m, l):
    """int of xi^m over cell offset l (reference coords), exact."""
    a = Fraction(2 * l - 1, 2)
    b = Fraction(2 * l + 1, 2)
    return (b ** (m + 1) - a ** (m + 1)) / (m + 1)


def _int_mom(m, l):
    """int of xi^m (xi - l) over cell offset l: moment about that cell's center."""
    return _int_avg(m + 1, l) - l * _int_avg(m, l)


def _solve_exact(A, B):
    """Gauss-Jordan over Fractions: A (n x n), B (n x m) -> A^-1 B."""
    n = len(A)
    M = [list(Arow) + list(Brow) for Arow, Brow in zip(A, B)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular stencil system")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


@lru_cache(maxsize=None)
def _coeff_maps():
    """Exact maps from the canonical 6 moments to monomial coefficients:
    three (4 x 6) cubic maps and one (6 x 6) quintic map."""
    def build(conds, deg):
        A = [[( _int_avg if kind == 'avg' else _int_mom)(m, l)
              for m in range(deg + 1)] for kind, l in conds]
        B = []
        for kind, l in conds:
            row = [Fraction(0)] * 6
            row[_moment_slot(kind, l)] = Fraction(1)
            B.append(row)
        return _solve_exact(A, B)
    cubics = tuple(build(STENCIL_CONDITIONS[i], 3) for i in range(3))
    quintic = build(QUINTIC_CONDITIONS, 5)
    return cubics, quintic


def _eval_row(cmap, xhat):
    """Row of 6 weights giving the polynomial's value at xhat from the moments."""
    deg = len(cmap) - 1
    powers = [xhat ** m for m in range(deg + 1)]
    return [sum(powers[m] * cmap[m][j] for m in range(deg + 1)) for j in range(6)]


class WeightSolveError(RuntimeError):
    """Linear-weight system unsolvable at a requested point."""


@dataclass(frozen=True)
class PointWeights:
    """Linear weights and evaluation rows for one reconstruction point."""
    xhat: float
    gamma: tuple                      # 3 entries; Fractions when xhat is rational
    eval_rows: np.ndarray             # (3, 6): moments -> p_i(xhat)
    quintic_row: np.ndarray           # (6,):   moments -> Q(xhat)
    split: bool = False
    gamma_pos: np.ndarray = None      # normalized positive-group weights
    gamma_neg: np.ndarray = None
    sigma_pos: float = 1.0
    sigma_neg: float = 0.0


def _split_tables(gamma):
    """Positive/negative group split: ghat+ = (g + 3|g|)/2, ghat- = ghat+ - g."""
    g = np.asarray([float(x) for x in gamma])
    gpos = (g + 3.0 * np.abs(g)) / 2.0
    gneg = gpos - g
    spos = gpos.sum()
    sneg = gneg.sum()
    return gpos / spos, gneg / sneg, spos, sneg


def linear_weights(xhat):
    """Find gamma with Q(xhat) = sum gamma_i p_i(xhat) identically in the data.

    For Fraction (or int) xhat the result is exact; floats go through a
    least-squares solve verified against all six moment directions.
    """
    cubics, quintic = _coeff_maps()
    exact = isinstance(xhat, (Fraction, int))
    xh = Fraction(xhat) if exact else float(xhat)
    rows = [_eval_row(c, xh) for c in cubics]
    rq = _eval_row(quintic, xh)
    if exact:
        gamma = None
        for combo in itertools.combinations(range(6), 3):
            A = [[rows[i][j] for i in range(3)] for j in combo]
            try:
                sol = _solve_exact(A, [[rq[j]] for j in combo])
            except ArithmeticError:
                continue
            cand = tuple(sol[i][0] for i in range(3))
            if all(sum(cand[i] * rows[i][j] for i in range(3)) == rq[j] for j in range(6)):
                gamma = cand
                break
        if gamma is None:
            raise WeightSolveError(f"no consistent linear weights at xhat={xhat}")
    else:
        A = np.array([[float(rows[i][j]) for i in range(3)] for j in range(6)])
        b = np.array([float(rq[j]) for j in range(6)])
        g, *_ = np.linalg.lstsq(A, b, rcond=None)
        resid = np.abs(A @ g - b).max()
        if resid > 1e-9:
            raise WeightSolveError(f"linear-weight residual {resid:.2e} at xhat={xhat}")
        gamma = tuple(g)
    ev = np.array([[float(rows[i][j]) for j in range(6)] for i in range(3)])
    qr = np.array([float(x) for x in rq])
    gf = np.array([float(x) for x in gamma])
    if (gf < 0).any():
        gp, gn, sp, sn = _split_tables(gamma)
        return PointWeights(float(xh), gamma, ev, qr, True, gp, gn, sp, sn)
    return PointWeights(float(xh), gamma, ev, qr)


@dataclass
class ReconstructionConfig:
    """lam regularizes the nonlinear weights; linear_mode bypasses them
    (debug/verification: the gamma combination reproduces the quintic)."""
    lam: float = 1e-6
    linear_mode: bool = False

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("lam must be positive")


# beta quadratic form on cubic coefficients (c1, c2, c3):
#   beta = c1^2 + (1/2) c1 c3 + (13/3) c2^2 + (3129/80) c3^2
_B11, _B13, _B22, _B33 = 1.0, 0.5, 13.0 / 3.0, 3129.0 / 80.0


@dataclass(frozen=True)
class StencilPolys:
    """Monomial coefficients of the three cubics and the quintic for one cell."""
    p: np.ndarray   # (3, 4)
    q: np.ndarray   # (6,)

    def eval_p(self, i, xhat):
        return float(np.polynomial.polynomial.polyval(xhat, self.p[i]))

    def eval_q(self, xhat):
        return float(np.polynomial.polynomial.polyval(xhat, self.q))


def build_stencil_polys(moments):
    """StencilPolys from the canonical 6-vector of moments."""
    cubics, quintic = _coeff_maps()
    m = np.asarray(moments, dtype=float)
    p = np.stack([np.array([[float(x) for x in row] for row in c]) @ m for c in cubics])
    q = np.array([[float(x) for x in row] for row in quintic]) @ m
    return StencilPolys(p, q)


def smoothness_indicators(polys):
    """(beta_0, beta_1, beta_2) in closed form."""
    c = polys.p
    c1, c2, c3 = c[:, 1], c[:, 2], c[:, 3]
    return tuple(_B11 * c1 * c1 + _B13 * c1 * c3 + _B22 * c2 * c2 + _B33 * c3 * c3)


def reconstruct_point(moments, weights, cfg=None):
    """HWENO value at one precomputed point from the canonical 6 moments."""
    cfg = cfg or ReconstructionConfig()
    m = np.asarray(moments, dtype=float)
    vals = weights.eval_rows @ m
    gamma = np.array([float(g) for g in weights.gamma])
    if cfg.linear_mode:
        return float(gamma @ vals)
    polys = build_stencil_polys(m)
    beta = np.array(smoothness_indicators(polys))
    inv = 1.0 / (cfg.lam + beta) ** 2
    if not weights.split:
        w = gamma * inv
        return float((w * vals).sum() / w.sum())
    wp = weights.gamma_pos * inv
    wn = weights.gamma_neg * inv
    rp = (wp * vals).sum() / wp.sum()
    rn = (wn * vals).sum() / wn.sum()
    return float(weights.sigma_pos * rp - weights.sigma_neg * rn)


class ReconstructionTable:
    """All per-point tables for degree k, in array form for batched evaluation.

    Point order: [left edge -1/2, right edge +1/2, the k+1 Gauss nodes, center 0].
    The center point is used only for profile output.
    """

    IDX_LEFT = 0
    IDX_RIGHT = 1
    IDX_GAUSS = 2

    def __init__(self, k):
        self.k = k
        rule = gauss_rule(k + 1)
        self.xg = rule.nodes
        self.wg = rule.weights
        pts = [Fraction(-1, 2), Fraction(1, 2)] + list(rule.nodes) + [Fraction(0)]
        self.idx_center = len(pts) - 1
        self.points = [linear_weights(x) for x in pts]
        self.npts = len(pts)
        self.xhat = np.array([p.xhat for p in self.points])
        self.eval_rows = np.stack([p.eval_rows for p in self.points])     # (npts,3,6)
        self.gamma = np.stack([np.array([float(g) for g in p.gamma])
                               for p in self.points])                     # (npts,3)
        self.split_mask = np.array([p.split for p in self.points])
        self.gamma_pos = np.stack([p.gamma_pos if p.split else
                                   np.array([float(g) for g in p.gamma])
                                   for p in self.points])
        self.gamma_neg = np.stack([p.gamma_neg if p.split else np.zeros(3)
                                   for p in self.points])
        self.sigma_pos = np.array([p.sigma_pos for p in self.points])
        self.sigma_neg = np.array([p.sigma_neg for p in self.points])
        cubics, _ = _coeff_maps()
        self.coef_maps = np.stack([np.array([[float(x) for x in row] for row in c])
                                   for c in cubics])                      # (3,4,6)


@lru_cache(maxsize=None)
def reconstruction_table(k):
    return ReconstructionTable(k)


def _hweno_values(M6, tab, cfg):
    """Batched Steps 1-5: M6 is (6, ...) moment data, returns (npts, ...)."""
    vals = np.einsum('pij,j...->pi...', tab.eval_rows, M6)
    if cfg.linear_mode:
        return np.einsum('pi,pi...->p...', tab.gamma, vals)
    coefs = np.einsum('iaj,j...->ia...', tab.coef_maps, M6)
    c1, c2, c3 = coefs[:, 1], coefs[:, 2], coefs[:, 3]
    beta = _B11 * c1 * c1 + _B13 * c1 * c3 + _B22 * c2 * c2 + _B33 * c3 * c3
    inv = 1.0 / (cfg.lam + beta) ** 2            # (3, ...)
    out = np.empty(vals.shape[:1] + vals.shape[2:])
    for ip in range(tab.npts):
        if not tab.split_mask[ip]:
            w = tab.gamma[ip].reshape((3,) + (1,) * (inv.ndim - 1)) * inv
            out[ip] = (w * vals[ip]).sum(axis=0) / w.sum(axis=0)
        else:
            shape = (3,) + (1,) * (inv.ndim - 1)
            wp = tab.gamma_pos[ip].reshape(shape) * inv
            wn = tab.gamma_neg[ip].reshape(shape) * inv
            rp = (wp * vals[ip]).sum(axis=0) / wp.sum(axis=0)
            rn = (wn * vals[ip]).sum(axis=0) / wn.sum(axis=0)
            out[ip] = tab.sigma_pos[ip] * rp - tab.sigma_neg[ip] * rn
    return out


def _moment_stack(ubar, vbar, lo, hi):
    """Canonical (6, ncells) stencil data for cells lo..hi (absolute indices)."""
    return np.stack([ubar[lo - 1:hi], ubar[lo:hi + 1], ubar[lo + 1:hi + 2],
                     vbar[lo - 1:hi], vbar[lo:hi + 1], vbar[lo + 1:hi + 2]])


def reconstruct_range_1d(ubar, vbar, lo, hi, tab, cfg):
    """Point values for cells lo..hi inclusive (absolute array indices into
    ghost-padded arrays): returns (npts, hi-lo+1)."""
    return _hweno_values(_moment_stack(ubar, vbar, lo, hi), tab, cfg)


def reconstruct_cell_1d(ubar, vbar, j, tab, cfg):
    """Traces for one (ghost-padded, absolute) cell index j: dict with
    u_plus_left (u at x_{j-1/2}+), u_minus_right (u at x_{j+1/2}-), u_gauss."""
    vals = reconstruct_range_1d(ubar, vbar, j, j, tab, cfg)[:, 0]
    return {
        "u_plus_left": vals[tab.IDX_LEFT],
        "u_minus_right": vals[tab.IDX_RIGHT],
        "u_gauss": vals[tab.IDX_GAUSS:tab.IDX_GAUSS + tab.k + 1],
        "u_center": vals[tab.idx_center],
    }


def reconstruct_range_2d(ubar, vbar, wbar, zbar, xlo, xhi, ylo, yhi, tab, cfg):
    """Dimension-by-dimension reconstruction on the cell block
    [xlo..xhi] x [ylo..yhi] (absolute indices into ghost-padded 2D arrays).

    Returns (npts_x, npts_y, ncx, ncy): u at (xhat_a, yhat_b) per cell.

    Stage 1 (y-direction), per cell column: {ubar, wbar} -> the x-averaged
    value U(yhat) and {vbar, zbar} -> the x-moment V(yhat), each a 1D HWENO
    reconstruction in y.  Stage 2 (x-direction), per yhat: {U, V} over the
    3-column stencil -> u(xhat, yhat).
    """
    # stage 1 over columns xlo-1..xhi+1 (the x-stencil of the target block)
    cxlo, cxhi = xlo - 1, xhi + 1

    def ystack(f):
        return np.stack([f[cxlo:cxhi + 1, ylo - 1:yhi],
                         f[cxlo:cxhi + 1, ylo:yhi + 1],
                         f[cxlo:cxhi + 1, ylo + 1:yhi + 2]])

    mU = np.concatenate([ystack(ubar), ystack(wbar)])   # (6, ncx+2, ncy)
    mV = np.concatenate([ystack(vbar), ystack(zbar)])
    U = _hweno_values(mU, tab, cfg)                     # (npts_y, ncx+2, ncy)
    V = _hweno_values(mV, tab, cfg)
    # stage 2: x-reconstruction per yhat point
    M6x = np.stack([U[:, :-2], U[:, 1:-1], U[:, 2:],
                    V[:, :-2], V[:, 1:-1], V[:, 2:]])   # (6, npts_y, ncx, ncy)
    vals = _hweno_values(M6x, tab, cfg)                 # (npts_x, npts_y, ncx, ncy)
    return vals
