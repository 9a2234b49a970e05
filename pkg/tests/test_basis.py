"""Basis functions, quadrature rules, and moment projections."""
import numpy as np
import pytest

from ldgkdv.basis import (Basis2D, UnsupportedOrderError, basis_norms,
                          basis_norms_2d, eval_basis, eval_basis_2d,
                          gauss_rule, project_cell_averages_1d,
                          project_cell_averages_2d, tensor_index)


def test_basis_values_at_zero():
    vals = eval_basis(4, 0.0)
    assert np.allclose(vals, [1.0, 0.0, -1.0 / 12.0, 0.0, 3.0 / 560.0],
                       rtol=0, atol=1e-16)


def test_basis_values_at_half():
    vals = eval_basis(2, 0.5)
    assert np.allclose(vals, [1.0, 0.5, 1.0 / 6.0], rtol=0, atol=1e-16)


def test_basis_derivative():
    vals = eval_basis(3, 0.3, deriv=1)
    assert np.allclose(vals, [0.0, 1.0, 0.6, 3 * 0.09 - 3.0 / 20.0], atol=1e-15)


def test_basis_rejects_k5():
    with pytest.raises(UnsupportedOrderError):
        eval_basis(5, 0.0)


def test_orthogonality_by_quadrature():
    rule = gauss_rule(5)
    vals = eval_basis(4, rule.nodes)
    gram = np.einsum('ig,jg,g->ij', vals, vals, rule.weights)
    off = gram - np.diag(np.diag(gram))
    assert np.abs(off).max() < 1e-14


def test_norm_values_closed_form():
    m = basis_norms(4)
    assert m[0] == 1.0
    assert abs(m[1] - 1.0 / 12.0) < 1e-16
    assert abs(m[2] - 1.0 / 180.0) < 1e-16
    # norms match quadrature of phi_l^2
    rule = gauss_rule(5)
    vals = eval_basis(4, rule.nodes)
    for l in range(5):
        quad = (vals[l] ** 2 * rule.weights).sum()
        # the l=4 square is degree 8 <= 2*5-1 so still exact
        assert abs(quad - m[l]) < 1e-15


def test_gauss_midpoint():
    r = gauss_rule(1)
    assert r.nodes[0] == 0.0 and r.weights[0] == 1.0


def test_gauss_two_point_nodes():
    r = gauss_rule(2)
    assert np.allclose(np.abs(r.nodes), 1.0 / (2.0 * np.sqrt(3.0)), atol=1e-15)


def test_gauss_three_point_integrates_quartic():
    r = gauss_rule(3)
    val = (r.nodes ** 4 * r.weights).sum()
    assert abs(val - 1.0 / 80.0) < 1e-16


def test_gauss_exactness_property():
    rng = np.random.default_rng(42)
    for npts in range(1, 6):
        r = gauss_rule(npts)
        assert abs(r.weights.sum() - 1.0) < 1e-15
        for _ in range(20):
            deg = 2 * npts - 1
            coef = rng.standard_normal(deg + 1)
            quad = (np.polynomial.polynomial.polyval(r.nodes, coef) * r.weights).sum()
            exact = sum(c / (m + 1) * (0.5 ** (m + 1) - (-0.5) ** (m + 1))
                        for m, c in enumerate(coef))
            assert abs(quad - exact) < 1e-13 * max(1.0, abs(exact))


def test_gauss_rejects_out_of_range():
    with pytest.raises(UnsupportedOrderError):
        gauss_rule(6)
    with pytest.raises(UnsupportedOrderError):
        gauss_rule(0)


def test_projection_constant():
    centers = np.linspace(0.05, 0.95, 10)
    ub, vb = project_cell_averages_1d(lambda x: np.ones_like(x), centers, 0.1)
    assert np.allclose(ub, 1.0, atol=1e-15)
    assert np.allclose(vb, 0.0, atol=1e-16)


def test_projection_linear_moment():
    # u = (x - x_j)/dx on one cell: avg 0, moment 1/12
    ub, vb = project_cell_averages_1d(lambda x: (x - 0.5) / 0.2,
                                      np.array([0.5]), 0.2)
    assert abs(ub[0]) < 1e-16
    assert abs(vb[0] - 1.0 / 12.0) < 1e-15


def test_projection_sin_vs_antiderivative():
    n = 160
    dx = 2 * np.pi / n
    centers = (np.arange(n) + 0.5) * dx
    ub, _ = project_cell_averages_1d(np.sin, centers, dx)
    exact = (np.cos(centers - dx / 2) - np.cos(centers + dx / 2)) / dx
    assert np.abs(ub - exact).max() < 1e-12


def test_projection_polynomial_exact():
    # any polynomial of degree <= 2*5-2 projects exactly with the 5-point rule
    rng = np.random.default_rng(1)
    coef = rng.standard_normal(8)
    dx = 0.3
    centers = np.array([0.4, 0.7])
    f = lambda x: np.polynomial.polynomial.polyval(x, coef)
    ub, vb = project_cell_averages_1d(f, centers, dx)
    import sympy as sp
    x = sp.symbols('x')
    poly = sum(sp.Float(c) * x ** m for m, c in enumerate(coef))
    for i, xj in enumerate(centers):
        lo, hi = xj - dx / 2, xj + dx / 2
        ue = float(sp.integrate(poly, (x, lo, hi))) / dx
        ve = float(sp.integrate(poly * (x - xj) / dx, (x, lo, hi))) / dx
        assert abs(ub[i] - ue) < 1e-12
        assert abs(vb[i] - ve) < 1e-12


def test_tensor_index_first_six():
    assert tensor_index(2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_basis_2d_first_six_values():
    xi, eta = 0.31, -0.12
    vals = eval_basis_2d(2, np.array(xi), np.array(eta))
    expected = [1.0, xi, eta, xi ** 2 - 1 / 12, xi * eta, eta ** 2 - 1 / 12]
    assert np.allclose(vals, expected, atol=1e-15)


def test_basis_2d_orthogonality():
    from ldgkdv.basis import gauss_rule
    r = gauss_rule(5)
    for k in (2, 3, 4):
        pairs = tensor_index(k)
        X, Y = np.meshgrid(r.nodes, r.nodes, indexing='ij')
        vals = eval_basis_2d(k, X, Y)
        w = r.weights[:, None] * r.weights[None, :]
        gram = np.einsum('iab,jab,ab->ij', vals, vals, w)
        off = gram - np.diag(np.diag(gram))
        assert np.abs(off).max() < 1e-14
        assert np.allclose(np.diag(gram), basis_norms_2d(k), rtol=1e-12)


def test_projection_2d_constant():
    xc = np.array([0.1, 0.3])
    yc = np.array([0.2, 0.4, 0.6])
    ub, vb, wb, zb = project_cell_averages_2d(
        lambda x, y: np.ones_like(x * y), xc, yc, 0.2, 0.2)
    assert np.allclose(ub, 1.0)
    for arr in (vb, wb, zb):
        assert np.abs(arr).max() < 1e-16
