"""Scaled orthogonal cell basis and Gauss-Legendre quadrature on the reference cell.

Everything lives on the reference coordinate xi = (x - x_j)/dx in [-1/2, 1/2];
quadrature weights are normalized so that sum(w) = 1, i.e. they approximate
cell *averages*.  2D uses tensor products of the 1D basis, ordered by total
degree (graded-lex), which matches the first six functions used in 2D.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DEGREE = 4

# Monomial coefficients of phi_0..phi_4 (rescaled monic Legendre on [-1/2, 1/2]).
_PHI_COEF = (
    (1.0,),
    (0.0, 1.0),
    (-1.0 / 12.0, 0.0, 1.0),
    (0.0, -3.0 / 20.0, 0.0, 1.0),
    (3.0 / 560.0, 0.0, -3.0 / 14.0, 0.0, 1.0),
)

# L2 norms m_l = int_{-1/2}^{1/2} phi_l^2 dxi  (exact rationals).
NORMS = np.array([1.0, 1.0 / 12.0, 1.0 / 180.0, 1.0 / 2800.0, 1.0 / 44100.0])

# Gauss-Legendre nodes/weights on [-1/2, 1/2], weights normalized to sum 1.
# Literals carry more digits than double precision; the 5-point rule includes
# the node 0.5384693101056831 that triggers negative linear weights downstream.
_G = {
    1: ((0.0,), (1.0,)),
    2: ((-0.28867513459481288225457439025098, 0.28867513459481288225457439025098),
        (0.5, 0.5)),
    3: ((-0.38729833462074168851792653997824, 0.0, 0.38729833462074168851792653997824),
        (0.27777777777777777777777777777778, 0.44444444444444444444444444444444,
         0.27777777777777777777777777777778)),
    4: ((-0.43056815579702628761254985237750, -0.16999052179242812786100591624406,
         0.16999052179242812786100591624406, 0.43056815579702628761254985237750),
        (0.17392742256872692868653197461100, 0.32607257743127307131346802538900,
         0.32607257743127307131346802538900, 0.17392742256872692868653197461100)),
    5: ((-0.45308992296933199640485515194986, -0.26923465505284154551049077934924,
         0.0, 0.26923465505284154551049077934924, 0.45308992296933199640485515194986),
        (0.11846344252809454375713202035996, 0.23931433524968323402064575741782,
         0.28444444444444444444444444444444, 0.23931433524968323402064575741782,
         0.11846344252809454375713202035996)),
}


class UnsupportedOrderError(ValueError):
    """Raised for polynomial degrees or quadrature sizes outside 1..5 / 0..4."""


def eval_basis(k, xi, deriv=0):
    """Values [phi_0..phi_k] (deriv=0) or [phi_0'..phi_k'] (deriv=1) at xi.

    xi may be scalar or array; returns shape (k+1,) + shape(xi).  Derivatives
    are in xi; the 1/dx chain factor is the caller's business.
    """
    if k > MAX_DEGREE or k < 0:
        raise UnsupportedOrderError(f"basis degree k={k} outside supported 0..{MAX_DEGREE}")
    if deriv not in (0, 1):
        raise UnsupportedOrderError(f"deriv={deriv} not supported (0 or 1)")
    xi = np.asarray(xi, dtype=float)
    out = np.empty((k + 1,) + xi.shape)
    for l in range(k + 1):
        c = np.polynomial.polynomial.polyder(_PHI_COEF[l]) if deriv else _PHI_COEF[l]
        out[l] = np.polynomial.polynomial.polyval(xi, c)
    return out


@dataclass(frozen=True)
class GaussRule:
    """Gauss-Legendre rule on [-1/2, 1/2] with unit weight sum."""
    npts: int
    nodes: np.ndarray
    weights: np.ndarray


def gauss_rule(npts):
    if npts < 1 or npts > 5:
        raise UnsupportedOrderError(f"gauss rule with {npts} points not supported (1..5)")
    x, w = _G[npts]
    return GaussRule(npts, np.array(x), np.array(w))


def basis_norms(k):
    """[m_0..m_k] with m_l = int phi_l^2 dxi."""
    if k > MAX_DEGREE:
        raise UnsupportedOrderError(f"k={k} outside supported range")
    return NORMS[: k + 1].copy()


def tensor_index(k):
    """2D basis index list [(ax, ay)] ordered by total degree then x-degree
    descending: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...

    The first six match the 2D basis listing: 1, xi, eta, xi^2-1/12, xi*eta,
    eta^2-1/12.
    """
    if k > MAX_DEGREE:
        raise UnsupportedOrderError(f"k={k} outside supported range")
    pairs = []
    for d in range(k + 1):
        for ay in range(d + 1):
            pairs.append((d - ay, ay))
    return pairs


def eval_basis_2d(k, xi, eta):
    """Values of the graded tensor basis at (xi, eta): shape (nb,) + shape(xi)."""
    pairs = tensor_index(k)
    px = eval_basis(k, xi)
    py = eval_basis(k, eta)
    return np.stack([px[ax] * py[ay] for ax, ay in pairs])


def basis_norms_2d(k):
    """Norms of the tensor basis: m_(ax,ay) = m_ax * m_ay."""
    return np.array([NORMS[ax] * NORMS[ay] for ax, ay in tensor_index(k)])


class Basis1D:
    """Precomputed basis tables for degree k on the reference cell.

    Attributes are the arrays every integral in the scheme needs: values and
    xi-derivatives at the (k+1) Gauss nodes, values at the cell edges, and
    the diagonal mass norms.
    """

    def __init__(self, k):
        if not 2 <= k <= MAX_DEGREE:
            raise UnsupportedOrderError(f"k={k} outside supported 2..{MAX_DEGREE}")
        self.k = k
        rule = gauss_rule(k + 1)
        self.gauss = rule
        self.xg = rule.nodes
        self.wg = rule.weights
        self.norms = basis_norms(k)
        self.phi_gauss = eval_basis(k, self.xg)            # (k+1, k+1): [l, G]
        self.dphi_gauss = eval_basis(k, self.xg, deriv=1)  # (k+1, k+1)
        self.phi_right = eval_basis(k, 0.5)
        self.phi_left = eval_basis(k, -0.5)


class Basis2D:
    """Tensor-product basis tables for degree k on the reference square."""

    def __init__(self, k):
        if not 2 <= k <= MAX_DEGREE:
            raise UnsupportedOrderError(f"k={k} outside supported 2..{MAX_DEGREE}")
        self.k = k
        self.pairs = tensor_index(k)
        self.nb = len(self.pairs)
        self.b1 = Basis1D(k)
        self.norms = basis_norms_2d(k)
        self.ax = np.array([p[0] for p in self.pairs])
        self.ay = np.array([p[1] for p in self.pairs])


# Initial data and Dirichlet ghosts always use the 5-point rule so projection
# error never pollutes a convergence table.
PROJECTION_RULE = gauss_rule(5)


def project_cell_averages_1d(u0, centers, dx, rule=PROJECTION_RULE):
    """(ubar, vbar) per cell: Gauss approximations of the cell average and the
    scaled first moment of u0 about each center."""
    pts = centers[:, None] + rule.nodes[None, :] * dx
    vals = u0(pts)
    ubar = vals @ rule.weights
    vbar = (vals * rule.nodes[None, :]) @ rule.weights
    return ubar, vbar


def project_cell_averages_2d(u0, xc, yc, dx, dy, rule=PROJECTION_RULE):
    """(ubar, vbar, wbar, zbar) on the grid xc x yc (1D coordinate arrays)."""
    gx = rule.nodes
    gw = rule.weights
    X = xc[:, None, None, None] + gx[None, None, :, None] * dx
    Y = yc[None, :, None, None] + gx[None, None, None, :] * dy
    vals = u0(X, Y)  # (nx, ny, 5, 5)
    wxy = gw[:, None] * gw[None, :]
    ubar = np.einsum('ijab,ab->ij', vals, wxy)
    vbar = np.einsum('ijab,a,ab->ij', vals, gx, wxy)
    wbar = np.einsum('ijab,b,ab->ij', vals, gx, wxy)
    zbar = np.einsum('ijab,a,b,ab->ij', vals, gx, gx, wxy)
    return ubar, vbar, wbar, zbar
