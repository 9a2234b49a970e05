"""Fused numba kernels for the quadratic-f / identity-r / linear-g equation
family (which covers the whole problem catalog).  The generic numpy pipeline
in semidiscrete.py stays the reference implementation; these kernels are
validated against it in the test suite.

Thread count: SOLVER_THREADS caps the 2D kernels' parallelism; unset runs
single-threaded (deterministic reference mode; the per-cell loops write
disjoint outputs, so results are identical at any thread count anyway).
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
    from numba import njit, prange
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency, but keep a fallback
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f
        if args and callable(args[0]):
            return args[0]
        return wrap

    prange = range

from .mesh import GHOST, Boundary, fill_ghosts_1d, fill_ghosts_2d

_B11, _B13, _B22, _B33 = 1.0, 0.5, 13.0 / 3.0, 3129.0 / 80.0


def _threads():
    env = os.environ.get("SOLVER_THREADS", "")
    try:
        want = max(1, int(env))
    except ValueError:
        return 1
    if HAVE_NUMBA:
        want = min(want, numba.config.NUMBA_NUM_THREADS)
    return want


@njit(cache=True, inline='always')
def _hweno_point(m6, ev_rows, gamma, split, gpos, gneg, spos, sneg,
                 beta0, beta1, beta2, lam, linear_mode):
    v0 = (ev_rows[0, 0] * m6[0] + ev_rows[0, 1] * m6[1] + ev_rows[0, 2] * m6[2]
          + ev_rows[0, 3] * m6[3] + ev_rows[0, 4] * m6[4] + ev_rows[0, 5] * m6[5])
    v1 = (ev_rows[1, 0] * m6[0] + ev_rows[1, 1] * m6[1] + ev_rows[1, 2] * m6[2]
          + ev_rows[1, 3] * m6[3] + ev_rows[1, 4] * m6[4] + ev_rows[1, 5] * m6[5])
    v2 = (ev_rows[2, 0] * m6[0] + ev_rows[2, 1] * m6[1] + ev_rows[2, 2] * m6[2]
          + ev_rows[2, 3] * m6[3] + ev_rows[2, 4] * m6[4] + ev_rows[2, 5] * m6[5])
    if linear_mode:
        return gamma[0] * v0 + gamma[1] * v1 + gamma[2] * v2
    i0 = 1.0 / ((lam + beta0) * (lam + beta0))
    i1 = 1.0 / ((lam + beta1) * (lam + beta1))
    i2 = 1.0 / ((lam + beta2) * (lam + beta2))
    if not split:
        w0 = gamma[0] * i0
        w1 = gamma[1] * i1
        w2 = gamma[2] * i2
        return (w0 * v0 + w1 * v1 + w2 * v2) / (w0 + w1 + w2)
    wp0 = gpos[0] * i0
    wp1 = gpos[1] * i1
    wp2 = gpos[2] * i2
    rp = (wp0 * v0 + wp1 * v1 + wp2 * v2) / (wp0 + wp1 + wp2)
    wn0 = gneg[0] * i0
    wn1 = gneg[1] * i1
    wn2 = gneg[2] * i2
    rn = (wn0 * v0 + wn1 * v1 + wn2 * v2) / (wn0 + wn1 + wn2)
    return spos * rp - sneg * rn


@njit(cache=True, inline='always')
def _betas(m6, cmaps):
    b = np.empty(3)
    for i in range(3):
        c1 = 0.0
        c2 = 0.0
        c3 = 0.0
        for j in range(6):
            c1 += cmaps[i, 1, j] * m6[j]
            c2 += cmaps[i, 2, j] * m6[j]
            c3 += cmaps[i, 3, j] * m6[j]
        b[i] = _B11 * c1 * c1 + _B13 * c1 * c3 + _B22 * c2 * c2 + _B33 * c3 * c3
    return b


@njit(cache=True)
def rhs1d_kernel(ub, vb, n, dx, fa, fb, gc, lam, linear_mode,
                 ev_rows, gamma, split_mask, gpos, gneg, spos, sneg, cmaps,
                 phiL, phiR, phig, dphig, wg, norms, dub, dvb):
    W = 3
    kp1 = wg.shape[0]
    npts = ev_rows.shape[0]
    nrec = n + 4                      # cells -2..n+1
    upts = np.empty((nrec, npts))
    m6 = np.empty(6)
    for c in range(nrec):
        j = c + W - 2                 # absolute index
        m6[0] = ub[j - 1]
        m6[1] = ub[j]
        m6[2] = ub[j + 1]
        m6[3] = vb[j - 1]
        m6[4] = vb[j]
        m6[5] = vb[j + 1]
        b = _betas(m6, cmaps)
        for pt in range(npts):
            upts[c, pt] = _hweno_point(m6, ev_rows[pt], gamma[pt],
                                       split_mask[pt], gpos[pt], gneg[pt],
                                       spos[pt], sneg[pt],
                                       b[0], b[1], b[2], lam, linear_mode)
    # q on cells -1..n+1 (r = identity)
    nq = n + 3
    qc = np.empty((kp1, nq))
    for c in range(nq):
        tr = c + 1                    # trace column of this cell
        rhatR = upts[tr, 1]
        rhatL = upts[tr - 1, 1]
        for l in range(kp1):
            vol = 0.0
            for gq in range(kp1):
                vol += upts[tr, 2 + gq] * dphig[l, gq] * wg[gq]
            qc[l, c] = -(vol - rhatR * phiR[l] + rhatL * phiL[l]) / (dx * norms[l])
    # q traces and gauss values
    qR = np.empty(nq)
    qL = np.empty(nq)
    qG = np.empty((kp1, nq))
    for c in range(nq):
        sR = 0.0
        sL = 0.0
        for l in range(kp1):
            sR += phiR[l] * qc[l, c]
            sL += phiL[l] * qc[l, c]
        qR[c] = sR
        qL[c] = sL
        for gq in range(kp1):
            s = 0.0
            for l in range(kp1):
                s += phig[l, gq] * qc[l, c]
            qG[gq, c] = s
    # p on cells 0..n
    npc = n + 1
    pc = np.empty((kp1, npc))
    ag = abs(gc)
    for c in range(npc):
        iq = c + 1                    # q column of this cell
        cmR = qR[iq]
        cpR = qL[iq + 1]
        cmL = qR[iq - 1]
        cpL = qL[iq]
        ghR = 0.5 * (gc * (cmR + cpR) - ag * (cmR - cpR))
        ghL = 0.5 * (gc * (cmL + cpL) - ag * (cmL - cpL))
        for l in range(kp1):
            vol = 0.0
            for gq in range(kp1):
                vol += gc * qG[gq, iq] * dphig[l, gq] * wg[gq]
            pc[l, c] = -(vol - ghR * phiR[l] + ghL * phiL[l]) / (dx * norms[l])
    # fluxes at interfaces x_{j+1/2}, j=-1..n-1; rhat' = 1 for identity r
    Hh = np.empty(n + 1)
    for j in range(-1, n):
        a = upts[j + 2, 1]
        b_ = upts[j + 3, 0]
        aa = abs(2.0 * fa * a + fb)
        ab = abs(2.0 * fa * b_ + fb)
        alpha = aa if aa > ab else ab
        fh = 0.5 * (fa * a * a + fb * a + fa * b_ * b_ + fb * b_ - alpha * (b_ - a))
        pL = 0.0
        for l in range(kp1):
            pL += phiL[l] * pc[l, j + 1]
        Hh[j + 1] = fh + pL
    for j in range(n):
        Fj = 0.0
        for gq in range(kp1):
            u = upts[j + 2, 2 + gq]
            pG = 0.0
            for l in range(kp1):
                pG += phig[l, gq] * pc[l, j]
            Fj += (fa * u * u + fb * u + pG) * wg[gq]
        Fj *= dx
        dub[W + j] = -(Hh[j + 1] - Hh[j]) / dx
        dvb[W + j] = -(Hh[j + 1] + Hh[j]) / (2.0 * dx) + Fj / (dx * dx)


@njit(cache=True, parallel=True)
def recon2d_kernel(ub, vb, wb, zb, nx, ny, lam, linear_mode,
                   ev_rows, gamma, split_mask, gpos, gneg, spos, sneg, cmaps,
                   upts):
    """Dimension-by-dimension reconstruction; upts shape
    (nx+4, ny+4, npts, npts) covering cells [-2, n+1]^2 (origin cell (-2,-2))."""
    W = 3
    npts = ev_rows.shape[0]
    nrx = nx + 4
    nry = ny + 4
    # stage 1: per column (ix over [-3..n+2] i.e. nrx+2 columns), y-recon of
    # (ub,wb) and (vb,zb); store U,V for stage 2
    U = np.empty((nrx + 2, nry, npts))
    V = np.empty((nrx + 2, nry, npts))
    for cx in prange(nrx + 2):
        i = cx + W - 3
        m6u = np.empty(6)
        m6v = np.empty(6)
        for cy in range(nry):
            j = cy + W - 2
            m6u[0] = ub[i, j - 1]
            m6u[1] = ub[i, j]
            m6u[2] = ub[i, j + 1]
            m6u[3] = wb[i, j - 1]
            m6u[4] = wb[i, j]
            m6u[5] = wb[i, j + 1]
            m6v[0] = vb[i, j - 1]
            m6v[1] = vb[i, j]
            m6v[2] = vb[i, j + 1]
            m6v[3] = zb[i, j - 1]
            m6v[4] = zb[i, j]
            m6v[5] = zb[i, j + 1]
            bu = _betas(m6u, cmaps)
            bv = _betas(m6v, cmaps)
            for pt in range(npts):
                U[cx, cy, pt] = _hweno_point(m6u, ev_rows[pt], gamma[pt],
                                             split_mask[pt], gpos[pt], gneg[pt],
                                             spos[pt], sneg[pt],
                                             bu[0], bu[1], bu[2], lam, linear_mode)
                V[cx, cy, pt] = _hweno_point(m6v, ev_rows[pt], gamma[pt],
                                             split_mask[pt], gpos[pt], gneg[pt],
                                             spos[pt], sneg[pt],
                                             bv[0], bv[1], bv[2], lam, linear_mode)
    # stage 2: x-recon per (cell, yhat)
    for cx in prange(nrx):
        m6 = np.empty(6)
        for cy in range(nry):
            for py in range(npts):
                m6[0] = U[cx, cy, py]
                m6[1] = U[cx + 1, cy, py]
                m6[2] = U[cx + 2, cy, py]
                m6[3] = V[cx, cy, py]
                m6[4] = V[cx + 1, cy, py]
                m6[5] = V[cx + 2, cy, py]
                b = _betas(m6, cmaps)
                for px in range(npts):
                    upts[cx, cy, px, py] = _hweno_point(
                        m6, ev_rows[px], gamma[px], split_mask[px],
                        gpos[px], gneg[px], spos[px], sneg[px],
                        b[0], b[1], b[2], lam, linear_mode)


@njit(cache=True, parallel=True)
def assemble2d_kernel(upts, p1, p2, nx, ny, dx, dy,
                      fa1, fb1, fa2, fb2,
                      ax, ay, phiL, phiR, phig, wg, xg,
                      dub, dvb, dwb, dzb):
    """Interface fluxes Hhat_1/Hhat_2 and the four moment derivatives."""
    W = 3
    kp1 = wg.shape[0]
    nb = ax.shape[0]
    # Hhat_1 on x-faces: (nx+1) faces x ny interior cells x kp1 gauss
    H1 = np.empty((nx + 1, ny, kp1))
    for fi in prange(nx + 1):
        i = fi - 1                    # face x_{i+1/2}
        for cj in range(ny):
            ty = cj + 2
            for b in range(kp1):
                a_ = upts[i + 2, ty, 1, 2 + b]     # u^- cell i right edge
                b_ = upts[i + 3, ty, 0, 2 + b]     # u^+ cell i+1 left edge
                s1 = abs(2.0 * fa1 * a_ + fb1)
                s2 = abs(2.0 * fa1 * b_ + fb1)
                alpha = s1 if s1 > s2 else s2
                fh = 0.5 * (fa1 * a_ * a_ + fb1 * a_ + fa1 * b_ * b_ + fb1 * b_
                            - alpha * (b_ - a_))
                # p1+ : cell i+1 left edge; p1 array origin cell 0
                ph = 0.0
                for m in range(nb):
                    ph += p1[i + 1, cj, m] * phiL[ax[m]] * phig[ay[m], b]
                H1[fi, cj, b] = fh + ph
    H2 = np.empty((nx, ny + 1, kp1))
    for ci in prange(nx):
        tx = ci + 2
        for fj in range(ny + 1):
            j = fj - 1
            for a in range(kp1):
                a_ = upts[tx, j + 2, 2 + a, 1]
                b_ = upts[tx, j + 3, 2 + a, 0]
                s1 = abs(2.0 * fa2 * a_ + fb2)
                s2 = abs(2.0 * fa2 * b_ + fb2)
                alpha = s1 if s1 > s2 else s2
                fh = 0.5 * (fa2 * a_ * a_ + fb2 * a_ + fa2 * b_ * b_ + fb2 * b_
                            - alpha * (b_ - a_))
                ph = 0.0
                for m in range(nb):
                    ph += p2[ci, j + 1, m] * phig[ax[m], a] * phiL[ay[m]]
                H2[ci, fj, a] = fh + ph
    for ci in prange(nx):
        for cj in range(ny):
            tx = ci + 2
            ty = cj + 2
            i0 = 0.0
            i0s = 0.0
            i1 = 0.0
            i1s = 0.0
            for b in range(kp1):
                hr = H1[ci + 1, cj, b]
                hl = H1[ci, cj, b]
                i0 += (hr - hl) * wg[b]
                i0s += (hr + hl) * wg[b]
                i1 += (hr - hl) * xg[b] * wg[b]
                i1s += (hr + hl) * xg[b] * wg[b]
            j0 = 0.0
            j0s = 0.0
            j1 = 0.0
            j1s = 0.0
            for a in range(kp1):
                ht = H2[ci, cj + 1, a]
                hb = H2[ci, cj, a]
                j0 += (ht - hb) * wg[a]
                j0s += (ht + hb) * wg[a]
                j1 += (ht - hb) * xg[a] * wg[a]
                j1s += (ht + hb) * xg[a] * wg[a]
            V1 = 0.0
            V2 = 0.0
            V1y = 0.0
            V2x = 0.0
            for a in range(kp1):
                for b in range(kp1):
                    u = upts[tx, ty, 2 + a, 2 + b]
                    pv1 = 0.0
                    pv2 = 0.0
                    for m in range(nb):
                        bv = phig[ax[m], a] * phig[ay[m], b]
                        pv1 += p1[ci, cj, m] * bv
                        pv2 += p2[ci, cj, m] * bv
                    h1 = fa1 * u * u + fb1 * u + pv1
                    h2 = fa2 * u * u + fb2 * u + pv2
                    wab = wg[a] * wg[b]
                    V1 += h1 * wab
                    V2 += h2 * wab
                    V1y += h1 * xg[b] * wab
                    V2x += h2 * xg[a] * wab
            dub[W + ci, W + cj] = -i0 / dx - j0 / dy
            dvb[W + ci, W + cj] = -i0s / (2.0 * dx) - j1 / dy + V1 / dx
            dwb[W + ci, W + cj] = -i1 / dx - j0s / (2.0 * dy) + V2 / dy
            dzb[W + ci, W + cj] = (-i1s / (2.0 * dx) - j1s / (2.0 * dy)
                                   + V1y / dx + V2x / dy)


@njit(cache=True, parallel=True)
def q_p_2d_kernel(upts, nx, ny, dx, dy,
                  g11c, g12c, g21c, g22c,
                  ax, ay, norms2, phiL, phiR, phig, dphig, wg,
                  q1, q2, p1, p2):
    """q solves on [-1, n+1]^2 then p solves on [0, n]^2 (fused, two passes)."""
    kp1 = wg.shape[0]
    nb = ax.shape[0]
    nqx = nx + 3
    nqy = ny + 3
    for cx in prange(nqx):
        for cy in range(nqy):
            tx = cx + 1
            ty = cy + 1
            for l in range(nb):
                lx = ax[l]
                ly = ay[l]
                vol1 = 0.0
                vol2 = 0.0
                for a in range(kp1):
                    for b in range(kp1):
                        u = upts[tx, ty, 2 + a, 2 + b]
                        wab = wg[a] * wg[b]
                        vol1 += u * dphig[lx, a] * phig[ly, b] * wab
                        vol2 += u * phig[lx, a] * dphig[ly, b] * wab
                lin1 = 0.0
                for b in range(kp1):
                    uR = upts[tx, ty, 1, 2 + b]
                    uL = upts[tx - 1, ty, 1, 2 + b]
                    lin1 += (uR * phiR[lx] - uL * phiL[lx]) * phig[ly, b] * wg[b]
                lin2 = 0.0
                for a in range(kp1):
                    uT = upts[tx, ty, 2 + a, 1]
                    uB = upts[tx, ty - 1, 2 + a, 1]
                    lin2 += (uT * phiR[ly] - uB * phiL[ly]) * phig[lx, a] * wg[a]
                q1[cx, cy, l] = -(vol1 - lin1) / (dx * norms2[l])
                q2[cx, cy, l] = -(vol2 - lin2) / (dy * norms2[l])
    ag11 = abs(g11c)
    ag12 = abs(g12c)
    ag21 = abs(g21c)
    ag22 = abs(g22c)
    npx = nx + 1
    npy = ny + 1
    for cx in prange(npx):
        for cy in range(npy):
            qx = cx + 1
            qy = cy + 1
            for l in range(nb):
                lx = ax[l]
                ly = ay[l]
                vol1x = 0.0
                vol1y = 0.0
                vol2x = 0.0
                vol2y = 0.0
                for a in range(kp1):
                    for b in range(kp1):
                        s1 = 0.0
                        s2 = 0.0
                        for m in range(nb):
                            bv = phig[ax[m], a] * phig[ay[m], b]
                            s1 += q1[qx, qy, m] * bv
                            s2 += q2[qx, qy, m] * bv
                        wab = wg[a] * wg[b]
                        dbx = dphig[lx, a] * phig[ly, b]
                        dby = phig[lx, a] * dphig[ly, b]
                        vol1x += g11c * s1 * dbx * wab
                        vol1y += g12c * s1 * dby * wab
                        vol2x += g21c * s2 * dbx * wab
                        vol2y += g22c * s2 * dby * wab
                lin1x = 0.0
                lin2x = 0.0
                for b in range(kp1):
                    q1mR = 0.0
                    q1pR = 0.0
                    q1mL = 0.0
                    q1pL = 0.0
                    q2mR = 0.0
                    q2pR = 0.0
                    q2mL = 0.0
                    q2pL = 0.0
                    for m in range(nb):
                        eR = phiR[ax[m]] * phig[ay[m], b]
                        eL = phiL[ax[m]] * phig[ay[m], b]
                        q1mR += q1[qx, qy, m] * eR
                        q1pR += q1[qx + 1, qy, m] * eL
                        q1mL += q1[qx - 1, qy, m] * eR
                        q1pL += q1[qx, qy, m] * eL
                        q2mR += q2[qx, qy, m] * eR
                        q2pR += q2[qx + 1, qy, m] * eL
                        q2mL += q2[qx - 1, qy, m] * eR
                        q2pL += q2[qx, qy, m] * eL
                    gh1R = 0.5 * (g11c * (q1mR + q1pR) - ag11 * (q1mR - q1pR))
                    gh1L = 0.5 * (g11c * (q1mL + q1pL) - ag11 * (q1mL - q1pL))
                    gh2R = 0.5 * (g21c * (q2mR + q2pR) - ag21 * (q2mR - q2pR))
                    gh2L = 0.5 * (g21c * (q2mL + q2pL) - ag21 * (q2mL - q2pL))
                    lin1x += (gh1R * phiR[lx] - gh1L * phiL[lx]) * phig[ly, b] * wg[b]
                    lin2x += (gh2R * phiR[lx] - gh2L * phiL[lx]) * phig[ly, b] * wg[b]
                lin1y = 0.0
                lin2y = 0.0
                for a in range(kp1):
                    q1mT = 0.0
                    q1pT = 0.0
                    q1mB = 0.0
                    q1pB = 0.0
                    q2mT = 0.0
                    q2pT = 0.0
                    q2mB = 0.0
                    q2pB = 0.0
                    for m in range(nb):
                        eT = phig[ax[m], a] * phiR[ay[m]]
                        eB = phig[ax[m], a] * phiL[ay[m]]
                        q1mT += q1[qx, qy, m] * eT
                        q1pT += q1[qx, qy + 1, m] * eB
                        q1mB += q1[qx, qy - 1, m] * eT
                        q1pB += q1[qx, qy, m] * eB
                        q2mT += q2[qx, qy, m] * eT
                        q2pT += q2[qx, qy + 1, m] * eB
                        q2mB += q2[qx, qy - 1, m] * eT
                        q2pB += q2[qx, qy, m] * eB
                    gh1T = 0.5 * (g12c * (q1mT + q1pT) - ag12 * (q1mT - q1pT))
                    gh1B = 0.5 * (g12c * (q1mB + q1pB) - ag12 * (q1mB - q1pB))
                    gh2T = 0.5 * (g22c * (q2mT + q2pT) - ag22 * (q2mT - q2pT))
                    gh2B = 0.5 * (g22c * (q2mB + q2pB) - ag22 * (q2mB - q2pB))
                    lin1y += (gh1T * phiR[ly] - gh1B * phiL[ly]) * phig[lx, a] * wg[a]
                    lin2y += (gh2T * phiR[ly] - gh2B * phiL[ly]) * phig[lx, a] * wg[a]
                p1[cx, cy, l] = -(vol1x / dx + vol1y / dy
                                  - lin1x / dx - lin1y / dy) / norms2[l]
                p2[cx, cy, l] = -(vol2x / dx + vol2y / dy
                                  - lin2x / dx - lin2y / dy) / norms2[l]


class _Tables1D:
    def __init__(self, k, lam, linear_mode):
        from .basis import Basis1D
        from .reconstruct import reconstruction_table
        tab = reconstruction_table(k)
        b = Basis1D(k)
        nrhs = k + 3   # skip the trailing center point in the hot loop
        self.ev_rows = np.ascontiguousarray(tab.eval_rows[:nrhs])
        self.gamma = np.ascontiguousarray(tab.gamma[:nrhs])
        self.split_mask = np.ascontiguousarray(tab.split_mask[:nrhs])
        self.gpos = np.ascontiguousarray(tab.gamma_pos[:nrhs])
        self.gneg = np.ascontiguousarray(tab.gamma_neg[:nrhs])
        self.spos = np.ascontiguousarray(tab.sigma_pos[:nrhs])
        self.sneg = np.ascontiguousarray(tab.sigma_neg[:nrhs])
        self.cmaps = np.ascontiguousarray(tab.coef_maps)
        self.phiL = b.phi_left
        self.phiR = b.phi_right
        self.phig = np.ascontiguousarray(b.phi_gauss)
        self.dphig = np.ascontiguousarray(b.dphi_gauss)
        self.wg = b.wg
        self.xg = b.xg
        self.norms = b.norms
        self.lam = lam
        self.linear_mode = linear_mode


class _Tables2D(_Tables1D):
    def __init__(self, k, lam, linear_mode):
        super().__init__(k, lam, linear_mode)
        from .basis import Basis2D
        b2 = Basis2D(k)
        self.ax = b2.ax.astype(np.int64)
        self.ay = b2.ay.astype(np.int64)
        self.norms2 = b2.norms


_tables_cache = {}


def _get_tables(dim, k, lam, linear_mode):
    key = (dim, k, lam, linear_mode)
    if key not in _tables_cache:
        _tables_cache[key] = (_Tables1D if dim == 1 else _Tables2D)(k, lam, linear_mode)
    return _tables_cache[key]


def rhs_1d_family(state, t, eq, mesh, cfg, exact):
    """Fast-path 1D rhs; returns None if numba is unavailable."""
    if not HAVE_NUMBA:
        return None
    from .semidiscrete import MomentField1D
    fam = eq.family
    tb = _get_tables(1, cfg.k, cfg.recon.lam, cfg.recon.linear_mode)
    fill_ghosts_1d((state.ubar, state.vbar), mesh, t, exact)
    out = MomentField1D(mesh)
    rhs1d_kernel(state.ubar, state.vbar, mesh.n, mesh.dx,
                 fam.fa, fam.fb, fam.gc, tb.lam, tb.linear_mode,
                 tb.ev_rows, tb.gamma, tb.split_mask, tb.gpos, tb.gneg,
                 tb.spos, tb.sneg, tb.cmaps,
                 tb.phiL, tb.phiR, tb.phig, tb.dphig, tb.wg, tb.norms,
                 out.data[0], out.data[1])
    if not np.isfinite(out.data).all():
        from .semidiscrete import NumericalBlowupError
        raise NumericalBlowupError("non-finite value in rhs_1d kernel output")
    return out


def rhs_2d_family(state, t, eq, mesh, cfg, exact):
    if not HAVE_NUMBA:
        return None
    from .semidiscrete import MomentField2D
    numba.set_num_threads(_threads())
    fam = eq.family
    tb = _get_tables(2, cfg.k, cfg.recon.lam, cfg.recon.linear_mode)
    fill_ghosts_2d((state.ubar, state.vbar, state.wbar, state.zbar),
                   mesh, t, exact)
    nx, ny = mesh.nx, mesh.ny
    npts = tb.ev_rows.shape[0]
    upts = np.empty((nx + 4, ny + 4, npts, npts))
    recon2d_kernel(state.ubar, state.vbar, state.wbar, state.zbar,
                   nx, ny, tb.lam, tb.linear_mode,
                   tb.ev_rows, tb.gamma, tb.split_mask, tb.gpos, tb.gneg,
                   tb.spos, tb.sneg, tb.cmaps, upts)
    nb = tb.ax.shape[0]
    q1 = np.empty((nx + 3, ny + 3, nb))
    q2 = np.empty_like(q1)
    p1 = np.empty((nx + 1, ny + 1, nb))
    p2 = np.empty_like(p1)
    q_p_2d_kernel(upts, nx, ny, mesh.dx, mesh.dy,
                  fam.g11c, fam.g12c, fam.g21c, fam.g22c,
                  tb.ax, tb.ay, tb.norms2, tb.phiL, tb.phiR,
                  tb.phig, tb.dphig, tb.wg, q1, q2, p1, p2)
    out = MomentField2D(mesh)
    assemble2d_kernel(upts, p1, p2, nx, ny, mesh.dx, mesh.dy,
                      fam.fa1, fam.fb1, fam.fa2, fam.fb2,
                      tb.ax, tb.ay, tb.phiL, tb.phiR, tb.phig, tb.wg, tb.xg,
                      out.data[0], out.data[1], out.data[2], out.data[3])
    if not np.isfinite(out.data).all():
        from .semidiscrete import NumericalBlowupError
        raise NumericalBlowupError("non-finite value in rhs_2d kernel output")
    return out
