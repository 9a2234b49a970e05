"""Mesh construction and ghost filling."""
import numpy as np
import pytest

from ldgkdv.mesh import (GHOST, Boundary, ConfigError, build_mesh_1d,
                         build_mesh_2d, fill_ghosts_1d, fill_ghosts_2d)


def test_build_mesh_basic():
    m = build_mesh_1d(0.0, 2 * np.pi, 10)
    assert abs(m.dx - np.pi / 5) < 1e-15
    assert abs(m.centers()[0] - np.pi / 10) < 1e-15


def test_build_mesh_table2_domain():
    m = build_mesh_1d(-10.0, 12.0, 40)
    assert abs(m.dx - 0.55) < 1e-15


def test_build_mesh_rejects_small_n():
    with pytest.raises(ConfigError):
        build_mesh_1d(0.0, 1.0, 4)


def test_build_mesh_rejects_empty_domain():
    with pytest.raises(ConfigError):
        build_mesh_1d(1.0, 1.0, 10)
    with pytest.raises(ConfigError):
        build_mesh_2d(0, 1, 3, 2, 10, 10)


def test_interface_identity():
    m = build_mesh_1d(-3.0, 7.0, 13)
    xi = m.interfaces()
    assert np.abs(np.diff(xi) - m.dx).max() < 1e-14


def test_periodic_fill_is_exact_copy():
    m = build_mesh_1d(0.0, 1.0, 10)
    rng = np.random.default_rng(0)
    W = GHOST
    ub = np.zeros(10 + 2 * W)
    ub[W:W + 10] = rng.standard_normal(10)
    vb = ub * 0.5
    fill_ghosts_1d((ub, vb), m)
    # ghost at index -1 equals interior index 9, bitwise
    assert ub[W - 1] == ub[W + 9]
    assert ub[W - 3] == ub[W + 7]
    assert ub[W + 10] == ub[W]
    assert vb[W - 1] == vb[W + 9]


def test_periodic_fill_constant_field():
    m = build_mesh_1d(0.0, 1.0, 8)
    W = GHOST
    ub = np.full(8 + 2 * W, np.nan)
    vb = np.full(8 + 2 * W, np.nan)
    ub[W:W + 8] = 3.25
    vb[W:W + 8] = 0.0
    fill_ghosts_1d((ub, vb), m)
    assert np.all(ub == 3.25)
    assert np.all(vb == 0.0)


def test_dirichlet_fill_matches_analytic_integral():
    # ghost ubar equals the 5-point Gauss average of sin over the ghost cell;
    # compare against the analytic cell integral
    for n, (a, b) in ((10, (0.0, 2 * np.pi)), (12, (0.0, 7.0))):
        m = build_mesh_1d(a, b, n, Boundary.DIRICHLET_EXACT)
        assert m.dx <= 0.7
        W = GHOST
        t = 0.37
        ub = np.zeros(n + 2 * W)
        vb = np.zeros(n + 2 * W)
        fill_ghosts_1d((ub, vb), m, t, lambda x, tt: np.sin(x + tt))
        xc = m.centers(ghosts=True)
        for idx in list(range(W)) + list(range(n + W, n + 2 * W)):
            lo, hi = xc[idx] - m.dx / 2, xc[idx] + m.dx / 2
            exact = (np.cos(lo + t) - np.cos(hi + t)) / m.dx
            assert abs(ub[idx] - exact) < 1e-12


def test_dirichlet_without_callback_raises():
    m = build_mesh_1d(0.0, 1.0, 8, Boundary.DIRICHLET_EXACT)
    W = GHOST
    ub = np.zeros(8 + 2 * W)
    vb = np.zeros(8 + 2 * W)
    with pytest.raises(ConfigError):
        fill_ghosts_1d((ub, vb), m)


def test_2d_corner_fill_commutes_for_periodic():
    m = build_mesh_2d(0.0, 1.0, 0.0, 1.0, 6, 7)
    rng = np.random.default_rng(3)
    W = GHOST
    fields = [np.zeros((6 + 2 * W, 7 + 2 * W)) for _ in range(4)]
    for f in fields:
        f[W:W + 6, W:W + 7] = rng.standard_normal((6, 7))
    snap = [f.copy() for f in fields]
    fill_ghosts_2d(tuple(fields), m)
    # manual y-fill then x-fill on the snapshot
    for f in snap:
        f[:, :W] = f[:, 7:7 + W]
        f[:, 7 + W:] = f[:, W:2 * W]
        f[:W, :] = f[6:6 + W, :]
        f[6 + W:, :] = f[W:2 * W, :]
    for f, g in zip(fields, snap):
        assert np.array_equal(f, g)


def test_2d_mixed_boundaries():
    m = build_mesh_2d(0.0, 32.0, 0.0, 16.0, 8, 6,
                      Boundary.PERIODIC, Boundary.DIRICHLET_EXACT)
    W = GHOST
    fields = [np.zeros((8 + 2 * W, 6 + 2 * W)) for _ in range(4)]
    fields[0][W:W + 8, W:W + 6] = 1.0
    fill_ghosts_2d(tuple(fields), m, 0.0,
                   lambda x, y, t: np.ones_like(x * y))
    # every cell, corners included, sees the constant
    assert np.allclose(fields[0], 1.0, atol=1e-14)
    for f in fields[1:]:
        assert np.abs(f).max() < 1e-14
