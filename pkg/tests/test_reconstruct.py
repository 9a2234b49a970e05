"""HWENO reconstruction: stencil systems, smoothness indicators, linear
weights (incl. the negative-weight split), point values, and 1D/2D drivers.
Expected values come from the independent brute-force oracle in helpers.py
or from symbolic integration."""
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from ldgkdv.mesh import GHOST
from ldgkdv.reconstruct import (ReconstructionConfig, WeightSolveError,
                                build_stencil_polys, linear_weights,
                                reconstruction_table, reconstruct_point,
                                reconstruct_range_1d, reconstruct_range_2d,
                                smoothness_indicators)
from helpers import (XI, cell_moments_exact, oracle_beta,
                     oracle_linear_weights, oracle_reconstruct,
                     oracle_stencil_polys)

CFG = ReconstructionConfig()
LIN = ReconstructionConfig(linear_mode=True)


# ------------------------------------------------------------ stencil systems

def test_constant_reproduction():
    polys = build_stencil_polys([2.5, 2.5, 2.5, 0.0, 0.0, 0.0])
    for xh in (-0.5, 0.0, 0.2, 0.5):
        for i in range(3):
            assert abs(polys.eval_p(i, xh) - 2.5) < 1e-14
        assert abs(polys.eval_q(xh) - 2.5) < 1e-14


def test_cubic_moments_reproduce_cubic():
    m6 = cell_moments_exact(XI ** 3)
    polys = build_stencil_polys(m6)
    for xh in (-0.5, -0.17, 0.33, 0.5):
        target = xh ** 3
        assert abs(polys.eval_q(xh) - target) < 1e-12
        for i in range(3):
            assert abs(polys.eval_p(i, xh) - target) < 1e-12


def test_quintic_exact_for_quintic_and_cubics_match_own_systems():
    expr = XI ** 5
    m6 = cell_moments_exact(expr)
    polys = build_stencil_polys(m6)
    for xh in (-0.5, 0.1, 0.5):
        assert abs(polys.eval_q(xh) - xh ** 5) < 1e-12
    # each cubic satisfies its own moment-matching system (re-integration)
    p_oracle, q_oracle = oracle_stencil_polys(m6)
    assert np.allclose(polys.p, np.array(p_oracle), atol=1e-12)
    assert np.allclose(polys.q, q_oracle, atol=1e-12)


def test_stencil_systems_match_oracle_on_random_data():
    rng = np.random.default_rng(11)
    for _ in range(25):
        m6 = rng.standard_normal(6)
        polys = build_stencil_polys(m6)
        p_o, q_o = oracle_stencil_polys(m6)
        assert np.allclose(polys.p, np.array(p_o), atol=1e-11)
        assert np.allclose(polys.q, q_o, atol=1e-11)


# ------------------------------------------------------- smoothness indicator

def test_beta_zero_for_constants():
    polys = build_stencil_polys([1.0, 1.0, 1.0, 0.0, 0.0, 0.0])
    assert max(smoothness_indicators(polys)) < 1e-28


def test_beta_linear_is_one():
    # p = xi exactly on every stencil
    m6 = cell_moments_exact(XI)
    polys = build_stencil_polys(m6)
    for b in smoothness_indicators(polys):
        assert abs(b - 1.0) < 1e-13


def test_beta_quadratic_closed_form_confirmed_symbolically():
    # p = xi^2 - 1/12: the symbolic oracle gives 13/3; the closed form must agree
    coef = [-1.0 / 12.0, 0.0, 1.0, 0.0]
    assert abs(oracle_beta(coef) - 13.0 / 3.0) < 1e-13
    m6 = cell_moments_exact(XI ** 2 - sp.Rational(1, 12))
    polys = build_stencil_polys(m6)
    for b in smoothness_indicators(polys):
        assert abs(b - 13.0 / 3.0) < 1e-12


def test_beta_matches_symbolic_oracle_random():
    rng = np.random.default_rng(5)
    for _ in range(10):
        m6 = rng.standard_normal(6)
        polys = build_stencil_polys(m6)
        betas = smoothness_indicators(polys)
        for i in range(3):
            assert abs(betas[i] - oracle_beta(polys.p[i])) < 1e-10


# ------------------------------------------------------------- linear weights

def test_linear_weights_at_right_interface_exact_rationals():
    pw = linear_weights(Fraction(1, 2))
    assert pw.gamma == (Fraction(25, 189), Fraction(14, 27), Fraction(22, 63))
    assert not pw.split


def test_linear_weights_at_left_interface_mirror():
    pw = linear_weights(Fraction(-1, 2))
    assert pw.gamma == (Fraction(14, 27), Fraction(25, 189), Fraction(22, 63))


def test_linear_weights_negative_gauss_node():
    pw = linear_weights(-0.5384693101056831 / 2)
    expected = (-1.19876833424689, -0.189130224626382, 2.38789855887328)
    assert np.abs(np.array([float(g) for g in pw.gamma]) - expected).max() < 1e-12
    assert pw.split
    # split recombination: s+ gpos_norm - s- gneg_norm == gamma
    rec = pw.sigma_pos * pw.gamma_pos - pw.sigma_neg * pw.gamma_neg
    assert np.abs(rec - np.array([float(g) for g in pw.gamma])).max() < 1e-13


def test_linear_weights_sum_to_one():
    for xh in (Fraction(1, 2), Fraction(-1, 2), 0.123, -0.432, 0.0):
        pw = linear_weights(xh)
        assert abs(float(sum(pw.gamma)) - 1.0) < 1e-13


def test_linear_weights_match_oracle():
    for xh in (0.21, -0.37, 0.5, -0.11):
        mine = np.array([float(g) for g in linear_weights(xh).gamma])
        assert np.abs(mine - oracle_linear_weights(xh)).max() < 1e-10


# ------------------------------------------------------------ reconstruct_point

def test_point_cubic_reproduction_any_lambda():
    m6 = cell_moments_exact(2 * XI ** 3 - XI + sp.Rational(1, 3))
    expr = lambda x: 2 * x ** 3 - x + 1.0 / 3.0
    for lam in (1e-6, 1e-2):
        cfg = ReconstructionConfig(lam=lam)
        for xh in (Fraction(1, 2), Fraction(-1, 2), 0.23):
            pw = linear_weights(xh)
            val = reconstruct_point(m6, pw, cfg)
            assert abs(val - expr(float(xh))) < 1e-12


def test_point_quintic_in_linear_mode():
    m6 = cell_moments_exact(XI ** 5 - XI ** 4 + sp.Rational(1, 7) * XI ** 2)
    f = lambda x: x ** 5 - x ** 4 + x ** 2 / 7.0
    for xh in (Fraction(1, 2), -0.22, 0.4):
        pw = linear_weights(xh)
        val = reconstruct_point(m6, pw, LIN)
        assert abs(val - f(float(xh))) < 1e-12


def test_point_step_data_matches_oracle():
    m6 = np.array([0.0, 0.0, 1.0, 0.0, 0.0, 0.0])
    pw = linear_weights(Fraction(1, 2))
    val = reconstruct_point(m6, pw, CFG)
    expected = oracle_reconstruct(m6, 0.5)
    assert abs(val - expected) < 1e-13
    # value within the candidate range of the positive-group polynomials
    polys = build_stencil_polys(m6)
    cand = [polys.eval_p(i, 0.5) for i in range(3)]
    assert min(cand) - 1e-12 <= val <= max(cand) + 1e-12


def test_point_matches_oracle_random_including_split_nodes():
    rng = np.random.default_rng(23)
    nodes = [0.5, -0.5, -0.5384693101056831 / 2, 0.5384693101056831 / 2, 0.17]
    for _ in range(10):
        m6 = rng.standard_normal(6)
        for xh in nodes:
            pw = linear_weights(xh)
            mine = reconstruct_point(m6, pw, CFG)
            ref = oracle_reconstruct(m6, xh)
            assert abs(mine - ref) < 1e-11


# ---------------------------------------------------------------- properties

def test_scale_equivariance_and_omega_invariance():
    rng = np.random.default_rng(7)
    m6 = rng.standard_normal(6)
    pw = linear_weights(Fraction(1, 2))
    v1 = reconstruct_point(m6, pw, CFG)
    c = 37.5
    v2 = reconstruct_point(c * m6, pw, CFG)
    # beta scales by c^2 but with lam tiny the weights barely move; assert the
    # relative deviation from exact scaling is at the lam-perturbation level
    assert abs(v2 - c * v1) < 1e-6 * max(1.0, abs(c * v1))
    # omega invariance is exact when lam = 0 is approached: compare weights
    from ldgkdv.reconstruct import build_stencil_polys, smoothness_indicators
    b1 = np.array(smoothness_indicators(build_stencil_polys(m6)))
    b2 = np.array(smoothness_indicators(build_stencil_polys(c * m6)))
    assert np.allclose(b2, c ** 2 * b1, rtol=1e-12)


def test_translation_invariance_beta_invariant():
    rng = np.random.default_rng(9)
    m6 = rng.standard_normal(6)
    shift = np.array([4.0, 4.0, 4.0, 0.0, 0.0, 0.0])
    b1 = np.array(smoothness_indicators(build_stencil_polys(m6)))
    b2 = np.array(smoothness_indicators(build_stencil_polys(m6 + shift)))
    assert np.allclose(b1, b2, atol=1e-12)
    pw = linear_weights(0.3)
    v1 = reconstruct_point(m6, pw, CFG)
    v2 = reconstruct_point(m6 + shift, pw, CFG)
    assert abs((v2 - v1) - 4.0) < 1e-12


def test_nonlinear_weights_normalized_within_groups():
    rng = np.random.default_rng(13)
    tab = reconstruction_table(4)
    lam = 1e-6
    for _ in range(50):
        m6 = rng.standard_normal(6)
        polys = build_stencil_polys(m6)
        beta = np.array(smoothness_indicators(polys))
        inv = 1.0 / (lam + beta) ** 2
        for pw in tab.points:
            if pw.split:
                for grp in (pw.gamma_pos, pw.gamma_neg):
                    w = grp * inv
                    w = w / w.sum()
                    assert w.min() >= 0.0
                    assert abs(w.sum() - 1.0) < 1e-13
            else:
                w = np.array([float(g) for g in pw.gamma]) * inv
                w = w / w.sum()
                assert w.min() >= -1e-15
                assert abs(w.sum() - 1.0) < 1e-13


def test_negative_weights_only_for_five_point_rule():
    assert not any(p.split for p in reconstruction_table(2).points)
    assert not any(p.split for p in reconstruction_table(3).points)
    splits = [p.split for p in reconstruction_table(4).points]
    assert sum(splits) == 2   # the two inner nonzero 5-point Gauss nodes


# ------------------------------------------------------------------ 1D driver

def _periodic_moments(f, n, a, b):
    from ldgkdv.basis import project_cell_averages_1d
    from ldgkdv.mesh import build_mesh_1d, fill_ghosts_1d
    mesh = build_mesh_1d(a, b, n)
    W = GHOST
    ub = np.zeros(n + 2 * W)
    vb = np.zeros(n + 2 * W)
    ub[W:W + n], vb[W:W + n] = project_cell_averages_1d(f, mesh.centers(), mesh.dx)
    fill_ghosts_1d((ub, vb), mesh)
    return mesh, ub, vb


def test_range_1d_constant():
    mesh, ub, vb = _periodic_moments(lambda x: 0 * x + 4.0, 12, 0.0, 1.0)
    tab = reconstruction_table(2)
    vals = reconstruct_range_1d(ub, vb, GHOST, GHOST + 11, tab, CFG)
    assert np.abs(vals - 4.0).max() < 1e-13


@pytest.mark.parametrize("k", [2, 3, 4])
def test_range_1d_sin_traces_sixth_order(k):
    errs = []
    for n in (40, 80):
        mesh, ub, vb = _periodic_moments(np.sin, n, 0.0, 2 * np.pi)
        tab = reconstruction_table(k)
        vals = reconstruct_range_1d(ub, vb, GHOST, GHOST + n - 1, tab, CFG)
        xr = mesh.centers() + mesh.dx / 2
        errs.append(np.abs(vals[tab.IDX_RIGHT] - np.sin(xr)).max())
    order = np.log(errs[0] / errs[1]) / np.log(2.0)
    assert order >= 5.5, (errs, order)


def test_range_1d_eno_property_near_discontinuity():
    # piecewise data: traces on the smooth side barely react to the jump
    n = 40
    mesh, ub, vb = _periodic_moments(np.sin, n, 0.0, 2 * np.pi)
    tab = reconstruction_table(2)
    base = reconstruct_range_1d(ub, vb, GHOST, GHOST + n - 1, tab, CFG)
    ub2 = ub.copy()
    ub2[GHOST + 30:] += 100.0   # big jump far from cell 10
    ub2[:GHOST] = ub2[30:30 + GHOST] * 0 + ub2[GHOST + n - 3: GHOST + n]
    vals = reconstruct_range_1d(ub2, vb, GHOST, GHOST + n - 1, tab, CFG)
    j = 10
    assert abs(vals[tab.IDX_RIGHT, j] - base[tab.IDX_RIGHT, j]) < 1e-10


# ------------------------------------------------------------------ 2D driver

def _periodic_moments_2d(f, n, a, b):
    from ldgkdv.basis import project_cell_averages_2d
    from ldgkdv.mesh import build_mesh_2d, fill_ghosts_2d
    mesh = build_mesh_2d(a, b, a, b, n, n)
    W = GHOST
    shape = (n + 2 * W, n + 2 * W)
    fields = [np.zeros(shape) for _ in range(4)]
    vals = project_cell_averages_2d(f, mesh.centers_x(), mesh.centers_y(),
                                    mesh.dx, mesh.dy)
    for F, v in zip(fields, vals):
        F[W:W + n, W:W + n] = v
    fill_ghosts_2d(tuple(fields), mesh)
    return mesh, fields


def test_range_2d_constant():
    mesh, fields = _periodic_moments_2d(lambda x, y: 0 * x + 2.0, 8, 0.0, 1.0)
    tab = reconstruction_table(2)
    W = GHOST
    vals = reconstruct_range_2d(*fields, W, W + 7, W, W + 7, tab, CFG)
    assert np.abs(vals - 2.0).max() < 1e-13


def test_range_2d_sin_convergence():
    errs = []
    for n in (20, 40):
        mesh, fields = _periodic_moments_2d(
            lambda x, y: np.sin(x + y), n, 0.0, 2 * np.pi)
        tab = reconstruction_table(2)
        W = GHOST
        vals = reconstruct_range_2d(*fields, W, W + n - 1, W, W + n - 1, tab, CFG)
        # interface trace at (x_{i+1/2}, y gauss)
        xr = mesh.centers_x()[:, None] + mesh.dx / 2
        yg = mesh.centers_y()[None, :, None] + tab.xg[None, None, :] * mesh.dy
        tr = np.moveaxis(vals[tab.IDX_RIGHT, tab.IDX_GAUSS:tab.IDX_GAUSS + 3], 0, -1)
        errs.append(np.abs(tr - np.sin(xr[:, :, None] + yg)).max())
    order = np.log(errs[0] / errs[1]) / np.log(2.0)
    assert order >= 5.5, (errs, order)


def test_range_2d_tensor_cubic_exact():
    # moments of xi^3 * eta^3 computed analytically per cell; reconstruction
    # must reproduce the tensor cubic exactly at every point
    import sympy as sp
    x, y = sp.symbols('x y')
    n = 6
    dx = 1.0
    expr = x ** 3 * y ** 3

    def f(xa, ya):
        return xa ** 3 * ya ** 3

    from ldgkdv.mesh import build_mesh_2d
    mesh = build_mesh_2d(0.0, 6.0, 0.0, 6.0, n, n)
    W = GHOST
    shape = (n + 2 * W, n + 2 * W)
    fields = [np.zeros(shape) for _ in range(4)]
    xc = mesh.centers_x(ghosts=True)
    yc = mesh.centers_y(ghosts=True)
    # analytic moments on ALL cells incl. ghosts (non-periodic data)
    for i, xi_ in enumerate(xc):
        for j, yj_ in enumerate(yc):
            Ix = sp.integrate(x ** 3, (x, xi_ - 0.5, xi_ + 0.5))
            Iy = sp.integrate(y ** 3, (y, yj_ - 0.5, yj_ + 0.5))
            Mx = sp.integrate(x ** 3 * (x - xi_), (x, xi_ - 0.5, xi_ + 0.5))
            My = sp.integrate(y ** 3 * (y - yj_), (y, yj_ - 0.5, yj_ + 0.5))
            fields[0][i, j] = float(Ix * Iy)
            fields[1][i, j] = float(Mx * Iy)
            fields[2][i, j] = float(Ix * My)
            fields[3][i, j] = float(Mx * My)
    tab = reconstruction_table(2)
    vals = reconstruct_range_2d(*fields, W, W + n - 1, W, W + n - 1, tab, CFG)
    for a, xh in enumerate(tab.xhat):
        for b, yh in enumerate(tab.xhat):
            X = mesh.centers_x()[:, None] + xh * mesh.dx
            Y = mesh.centers_y()[None, :] + yh * mesh.dy
            ref = f(X, Y)
            scale = np.abs(ref).max()
            assert np.abs(vals[a, b] - ref).max() < 1e-12 * scale


def test_weight_solve_error_unreachable_point():
    # a point where the 3-polynomial system genuinely degenerates is hard to
    # hit; instead verify the error type exists and floats far outside the
    # cell still solve (documenting the relaxed precondition)
    pw = linear_weights(0.9)
    assert abs(float(sum(pw.gamma)) - 1.0) < 1e-12
    assert isinstance(WeightSolveError("x"), RuntimeError)
