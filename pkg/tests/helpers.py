"""Independent oracles for the test suite.

The reconstruction oracle re-implements the whole point-value procedure from
scratch (runtime linear solves, no shared tables); moment helpers integrate
symbolically.  Nothing here imports from ldgkdv.reconstruct internals.
"""
import numpy as np
import sympy as sp

XI = sp.symbols('xi')


def cell_moments_exact(expr, offsets=(-1, 0, 1)):
    """Exact (avg, moment) pairs over reference cells at the given offsets for
    a sympy expression in XI; returns the canonical 6-vector (floats)."""
    avgs = []
    moms = []
    for l in offsets:
        a, b = sp.Rational(2 * l - 1, 2), sp.Rational(2 * l + 1, 2)
        avgs.append(float(sp.integrate(expr, (XI, a, b))))
        moms.append(float(sp.integrate(expr * (XI - l), (XI, a, b))))
    return np.array(avgs + moms)


def oracle_stencil_polys(m6):
    """Straight-line construction of p_0, p_1, p_2 (cubic) and Q (quintic)
    by solving the moment-matching systems numerically."""
    def avg_row(deg, l):
        return [((l + 0.5) ** (m + 1) - (l - 0.5) ** (m + 1)) / (m + 1)
                for m in range(deg + 1)]

    def mom_row(deg, l):
        out = []
        for m in range(deg + 1):
            i1 = ((l + 0.5) ** (m + 2) - (l - 0.5) ** (m + 2)) / (m + 2)
            i0 = ((l + 0.5) ** (m + 1) - (l - 0.5) ** (m + 1)) / (m + 1)
            out.append(i1 - l * i0)
        return out

    u = {-1: m6[0], 0: m6[1], 1: m6[2]}
    v = {-1: m6[3], 0: m6[4], 1: m6[5]}
    systems = {
        0: ([avg_row(3, -1), avg_row(3, 0), mom_row(3, -1), mom_row(3, 0)],
            [u[-1], u[0], v[-1], v[0]]),
        1: ([avg_row(3, 0), avg_row(3, 1), mom_row(3, 0), mom_row(3, 1)],
            [u[0], u[1], v[0], v[1]]),
        2: ([avg_row(3, -1), avg_row(3, 0), avg_row(3, 1), mom_row(3, 0)],
            [u[-1], u[0], u[1], v[0]]),
    }
    p = [np.linalg.solve(np.array(A), np.array(b)) for A, b in systems.values()]
    AQ = [avg_row(5, -1), avg_row(5, 0), avg_row(5, 1),
          mom_row(5, -1), mom_row(5, 0), mom_row(5, 1)]
    q = np.linalg.solve(np.array(AQ), np.array([u[-1], u[0], u[1], v[-1], v[0], v[1]]))
    return p, q


def oracle_beta(coef):
    """Smoothness indicator by symbolic integration of the defining sum."""
    p = sum(sp.Float(c) * XI ** m for m, c in enumerate(coef))
    total = sp.S(0)
    for m in range(1, 4):
        dm = sp.diff(p, XI, m)
        total += sp.integrate(dm ** 2, (XI, sp.Rational(-1, 2), sp.Rational(1, 2)))
    return float(total)


def oracle_linear_weights(xhat):
    """gamma at xhat via least squares on the moment-space identity."""
    rows = []
    rq = []
    for j in range(6):
        e = np.zeros(6)
        e[j] = 1.0
        p, q = oracle_stencil_polys(e)
        rows.append([np.polynomial.polynomial.polyval(xhat, pi) for pi in p])
        rq.append(np.polynomial.polynomial.polyval(xhat, q))
    g, *_ = np.linalg.lstsq(np.array(rows), np.array(rq), rcond=None)
    assert np.abs(np.array(rows) @ g - np.array(rq)).max() < 1e-11
    return g


def oracle_reconstruct(m6, xhat, lam=1e-6):
    """Brute-force Steps 1-5 at one point, including the negative-weight split."""
    p, q = oracle_stencil_polys(m6)
    beta = np.array([oracle_beta(pi) for pi in p])
    gamma = oracle_linear_weights(xhat)
    vals = np.array([np.polynomial.polynomial.polyval(xhat, pi) for pi in p])
    if (gamma >= 0).all():
        w = gamma / (lam + beta) ** 2
        w = w / w.sum()
        return float(w @ vals)
    gpos = (gamma + 3 * np.abs(gamma)) / 2
    gneg = gpos - gamma
    spos, sneg = gpos.sum(), gneg.sum()
    wp = (gpos / spos) / (lam + beta) ** 2
    wn = (gneg / sneg) / (lam + beta) ** 2
    rp = (wp @ vals) / wp.sum()
    rn = (wn @ vals) / wn.sum()
    return float(spos * rp - sneg * rn)


def gauss5():
    nodes = np.array([-0.9061798459386640, -0.5384693101056831, 0.0,
                      0.5384693101056831, 0.9061798459386640]) / 2
    weights = np.array([0.2369268850561891, 0.4786286704993665,
                        0.5688888888888889, 0.4786286704993665,
                        0.2369268850561891]) / 2
    return nodes, weights
