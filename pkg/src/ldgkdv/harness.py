"""Run driver: single runs, convergence studies, error norms, profile/report
files, and the matplotlib figures rendered next to each delimited output.

Error norms are mean-normalized over the domain (L1 = (1/|O|) int |e|,
L2 = sqrt((1/|O|) int e^2), Linf = max), sampled at the reconstructed values
on the (k+1) Gauss points per cell (tensor points in 2D).
"""
from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field, asdict
from typing import Optional

import numpy as np

from .basis import (Basis1D, Basis2D, project_cell_averages_1d,
                    project_cell_averages_2d)
from .mesh import (GHOST, Boundary, ConfigError, build_mesh_1d, build_mesh_2d,
                   fill_ghosts_1d, fill_ghosts_2d)
from .problems import get_problem
from .reconstruct import reconstruction_table, reconstruct_range_1d, reconstruct_range_2d
from .semidiscrete import (MomentField1D, MomentField2D, SolverConfig,
                           rhs_1d, rhs_2d)
from .timestepping import TimeControls, advance, compute_dt


class UnsupportedModeError(RuntimeError):
    pass


@dataclass
class RunConfig:
    problem: str = "linear1d"
    k: int = 2
    n: tuple = (40,)                  # resolutions; one entry unless convergence
    T: Optional[float] = None
    cfl: float = 0.5
    lam: float = 1e-6
    mode: str = "single"              # single | convergence | snapshots
    snap_times: tuple = ()
    out: Optional[str] = None
    params: dict = field(default_factory=dict)
    figures: bool = True
    linear_weights: bool = False
    use_kernels: bool = True

    def validate(self):
        if self.k not in (2, 3, 4):
            raise ConfigError(f"k={self.k} not in {{2, 3, 4}}")
        if not self.n or any(ni < 5 for ni in self.n):
            raise ConfigError(f"all resolutions must be >= 5, got {self.n}")
        if self.mode not in ("single", "convergence", "snapshots"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.cfl <= 0 or self.lam <= 0:
            raise ConfigError("cfl and lambda must be positive")

    def echo(self):
        d = asdict(self)
        d["n"] = list(self.n)
        d["snap_times"] = list(self.snap_times)
        return json.dumps(d, sort_keys=True)


@dataclass
class ConvergenceRow:
    n: int
    L1: float
    L2: float
    Linf: float
    order_L1: float = float("nan")
    order_L2: float = float("nan")
    order_Linf: float = float("nan")
    note: str = ""


@dataclass
class ConvergenceReport:
    problem: str
    k: int
    T: float
    rows: list = field(default_factory=list)

    def compute_orders(self):
        for prev, cur in zip(self.rows, self.rows[1:]):
            if prev.note or cur.note:
                continue
            den = np.log(cur.n / prev.n)
            cur.order_L1 = float(np.log(prev.L1 / cur.L1) / den)
            cur.order_L2 = float(np.log(prev.L2 / cur.L2) / den)
            cur.order_Linf = float(np.log(prev.Linf / cur.Linf) / den)

    def format_table(self):
        lines = ["%6s %12s %7s %12s %7s %12s %7s"
                 % ("n", "L1", "order", "L2", "order", "Linf", "order")]
        for r in self.rows:
            if r.note:
                lines.append("%6d  run failed: %s" % (r.n, r.note))
                continue
            lines.append("%6d %12.4e %7.2f %12.4e %7.2f %12.4e %7.2f"
                         % (r.n, r.L1, r.order_L1, r.L2, r.order_L2,
                            r.Linf, r.order_Linf))
        return "\n".join(lines)


def observed_order(e_prev, e_cur, n_prev, n_cur):
    return float(np.log(e_prev / e_cur) / np.log(n_cur / n_prev))


def _init_state_1d(problem, mesh):
    state = MomentField1D(mesh)
    W = GHOST
    xc = mesh.centers()
    ub, vb = project_cell_averages_1d(problem.u0, xc, mesh.dx)
    state.data[0, W:W + mesh.n] = ub
    state.data[1, W:W + mesh.n] = vb
    fill_ghosts_1d((state.ubar, state.vbar), mesh, 0.0, problem.exact)
    return state


def _init_state_2d(problem, mesh):
    state = MomentField2D(mesh)
    W = GHOST
    ub, vb, wb, zb = project_cell_averages_2d(
        problem.u0, mesh.centers_x(), mesh.centers_y(), mesh.dx, mesh.dy)
    sl = (slice(W, W + mesh.nx), slice(W, W + mesh.ny))
    for i, f in enumerate((ub, vb, wb, zb)):
        state.data[i][sl] = f
    fill_ghosts_2d((state.ubar, state.vbar, state.wbar, state.zbar),
                   mesh, 0.0, problem.exact)
    return state


def _build_mesh(problem, n):
    if problem.dim == 1:
        return build_mesh_1d(*problem.domain, n, problem.boundary[0])
    return build_mesh_2d(*problem.domain, n, n,
                         problem.boundary[0], problem.boundary[1])


def error_norms(state, exact, mesh, t, scfg):
    """(L1, L2, Linf) of the reconstructed Gauss-point values against exact
    at time t, quadrature-weighted and mean-normalized over the domain."""
    if exact is None:
        raise UnsupportedModeError("problem has no exact solution")
    tab = reconstruction_table(scfg.k)
    W = GHOST
    k = scfg.k
    IG = tab.IDX_GAUSS
    if isinstance(state, MomentField1D):
        fill_ghosts_1d((state.ubar, state.vbar), state.mesh, t, exact)
        vals = reconstruct_range_1d(state.ubar, state.vbar,
                                    W, W + mesh.n - 1, tab, scfg.recon)
        uG = vals[IG:IG + k + 1]
        xc = mesh.centers()
        pts = xc[None, :] + tab.xg[:, None] * mesh.dx
        e = np.abs(uG - exact(pts, t))
        wsum = np.einsum('gc,g->', e, tab.wg) * mesh.dx
        w2sum = np.einsum('gc,g->', e ** 2, tab.wg) * mesh.dx
        vol = mesh.b - mesh.a
        return wsum / vol, float(np.sqrt(w2sum / vol)), float(e.max())
    fill_ghosts_2d((state.ubar, state.vbar, state.wbar, state.zbar),
                   state.mesh, t, exact)
    vals = reconstruct_range_2d(state.ubar, state.vbar, state.wbar, state.zbar,
                                W, W + mesh.nx - 1, W, W + mesh.ny - 1,
                                tab, scfg.recon)
    uG = vals[IG:IG + k + 1, IG:IG + k + 1]
    X = (mesh.centers_x()[:, None, None, None]
         + tab.xg[None, None, :, None] * mesh.dx)
    Y = (mesh.centers_y()[None, :, None, None]
         + tab.xg[None, None, None, :] * mesh.dy)
    e = np.abs(np.moveaxis(uG, (0, 1), (2, 3)) - exact(X, Y, t))
    wxy = tab.wg[:, None] * tab.wg[None, :]
    wsum = np.einsum('ijab,ab->', e, wxy) * mesh.dx * mesh.dy
    w2sum = np.einsum('ijab,ab->', e ** 2, wxy) * mesh.dx * mesh.dy
    vol = (mesh.bx - mesh.ax) * (mesh.by - mesh.ay)
    return wsum / vol, float(np.sqrt(w2sum / vol)), float(e.max())


def _solve(problem, n, cfg, T=None, snap_times=(), on_snapshot=None):
    """Advance one problem instance; returns (state, mesh, log, elapsed)."""
    mesh = _build_mesh(problem, n)
    scfg = SolverConfig(k=cfg.k, use_kernels=cfg.use_kernels)
    scfg.recon.lam = cfg.lam
    scfg.recon.linear_mode = cfg.linear_weights
    T = problem.default_T if T is None else T
    eq = problem.eq
    is1d = problem.dim == 1
    state = _init_state_1d(problem, mesh) if is1d else _init_state_2d(problem, mesh)
    W = GHOST

    if is1d:
        def rhs_arrays(data, t):
            return rhs_1d(MomentField1D(mesh, data), t, eq, mesh, scfg,
                          exact=problem.exact).data

        def alpha_of(data):
            ui = data[0, W:W + mesh.n]
            lohi = np.array([ui.min(), ui.max()])
            return float(np.abs(eq.fprime(lohi)).max())

        def mass(data):
            return float(data[0, W:W + mesh.n].sum() * mesh.dx)

        dy = None
    else:
        def rhs_arrays(data, t):
            return rhs_2d(MomentField2D(mesh, data), t, eq, mesh, scfg,
                          exact=problem.exact).data

        def alpha_of(data):
            ui = data[0, W:W + mesh.nx, W:W + mesh.ny]
            lohi = np.array([ui.min(), ui.max()])
            return [float(np.abs(eq.f1prime(lohi)).max()),
                    float(np.abs(eq.f2prime(lohi)).max())]

        def mass(data):
            return float(data[0, W:W + mesh.nx, W:W + mesh.ny].sum()
                         * mesh.dx * mesh.dy)

        dy = mesh.dy

    controls = TimeControls(t_end=T, cfl_c=cfg.cfl)

    def dt_provider(data, t):
        return compute_dt(None, cfg.k, mesh.dx, dy, alpha_of(data),
                          eq.disp_scale, controls)

    t0 = time.time()
    times = sorted(set(float(s) for s in snap_times if 0.0 < s <= T))
    data = state.data
    tcur = 0.0
    log = []
    for target in times + [T]:
        if target <= tcur + 1e-14:
            continue
        seg = TimeControls(t_end=target, cfl_c=cfg.cfl)
        data, seglog = advance(data, tcur, seg, rhs_arrays, dt_provider, mass)
        log.extend(seglog)
        tcur = target
        if on_snapshot is not None and (target in times or target == T):
            st = (MomentField1D(mesh, data) if is1d else MomentField2D(mesh, data))
            on_snapshot(st, tcur)
    final = MomentField1D(mesh, data) if is1d else MomentField2D(mesh, data)
    return final, mesh, log, time.time() - t0


def center_values(state, scfg):
    """Reconstructed u at cell centers (for profiles)."""
    tab = reconstruction_table(scfg.k)
    W = GHOST
    mesh = state.mesh
    if isinstance(state, MomentField1D):
        vals = reconstruct_range_1d(state.ubar, state.vbar,
                                    W, W + mesh.n - 1, tab, scfg.recon)
        return vals[tab.idx_center]
    vals = reconstruct_range_2d(state.ubar, state.vbar, state.wbar, state.zbar,
                                W, W + mesh.nx - 1, W, W + mesh.ny - 1,
                                tab, scfg.recon)
    return vals[tab.idx_center, tab.idx_center]


def emit_profile(state, mesh, t, path, scfg, config_echo=""):
    """CSV of reconstructed center values; '#'-prefixed header carries the
    resolved config.  Returns the rendered figure path (or None)."""
    vals = center_values(state, scfg)
    try:
        with open(path, "w") as fh:
            fh.write(f"# ldgkdv profile t={t!r}\n")
            if config_echo:
                fh.write(f"# config {config_echo}\n")
            if isinstance(state, MomentField1D):
                fh.write("x,u\n")
                for x, u in zip(mesh.centers(), vals):
                    fh.write("%.17g,%.17g\n" % (x, u))
            else:
                fh.write("x,y,u\n")
                xs, ys = mesh.centers_x(), mesh.centers_y()
                for i, x in enumerate(xs):
                    for j, y in enumerate(ys):
                        fh.write("%.17g,%.17g,%.17g\n" % (x, y, vals[i, j]))
    except OSError as err:
        raise OSError(f"cannot write profile {path}: {err}") from err
    return vals


def render_profile_figure(state, mesh, t, vals, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if isinstance(state, MomentField1D):
        ax.plot(mesh.centers(), vals, "-", lw=1.2)
        ax.set_xlabel("x")
        ax.set_ylabel("u")
    else:
        xs, ys = mesh.centers_x(), mesh.centers_y()
        pc = ax.pcolormesh(xs, ys, vals.T, shading="auto", cmap="viridis")
        fig.colorbar(pc, ax=ax, label="u")
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_aspect("equal")
    ax.set_title(f"t = {t:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def render_convergence_figure(report, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    rows = [r for r in report.rows if not r.note]
    if not rows:
        return None
    ns = np.array([r.n for r in rows], dtype=float)
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    for attr, mk in (("L1", "o"), ("L2", "s"), ("Linf", "^")):
        ax.loglog(ns, [getattr(r, attr) for r in rows], mk + "-", label=attr)
    ref = rows[0].L1 * (ns / ns[0]) ** (-(report.k + 1))
    ax.loglog(ns, ref, "k--", lw=0.8, label=f"order {report.k + 1}")
    ax.set_xlabel("n")
    ax.set_ylabel("error")
    ax.legend()
    ax.set_title(f"{report.problem}, k={report.k}")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def write_convergence_csv(report, path, config_echo=""):
    with open(path, "w") as fh:
        fh.write(f"# ldgkdv convergence {report.problem} k={report.k} T={report.T!r}\n")
        if config_echo:
            fh.write(f"# config {config_echo}\n")
        fh.write("n,L1,order_L1,L2,order_L2,Linf,order_Linf,note\n")
        for r in report.rows:
            fh.write("%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n"
                     % (r.n, r.L1, r.order_L1, r.L2, r.order_L2,
                        r.Linf, r.order_Linf, r.note))


def run_single(cfg):
    """One run at cfg.n[0]; returns dict with state, mesh, norms (if exact),
    elapsed seconds, and emitted file paths."""
    cfg.validate()
    problem = get_problem(cfg.problem, **cfg.params)
    scfg = SolverConfig(k=cfg.k, use_kernels=cfg.use_kernels)
    scfg.recon.lam = cfg.lam
    scfg.recon.linear_mode = cfg.linear_weights
    T = problem.default_T if cfg.T is None else cfg.T
    snaps = []

    def collect(st, t):
        snaps.append((st, t))

    state, mesh, log, elapsed = _solve(
        problem, cfg.n[0], cfg, T=T,
        snap_times=cfg.snap_times if cfg.mode == "snapshots" else (),
        on_snapshot=collect if cfg.mode == "snapshots" else None)
    result = dict(state=state, mesh=mesh, log=log, elapsed=elapsed,
                  T=T, problem=problem, files=[])
    if problem.exact is not None:
        result["norms"] = error_norms(state, problem.exact, mesh, T, scfg)
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        targets = snaps if cfg.mode == "snapshots" else [(state, T)]
        for st, t in targets:
            base = os.path.join(cfg.out, f"{cfg.problem}_k{cfg.k}_n{cfg.n[0]}_t{t:g}")
            vals = emit_profile(st, mesh, t, base + ".csv", scfg, cfg.echo())
            result["files"].append(base + ".csv")
            if cfg.figures:
                result["files"].append(
                    render_profile_figure(st, mesh, t, vals, base + ".png"))
    return result


def run_convergence(cfg):
    """Sequential runs over cfg.n; emits CSV + figure when cfg.out is set."""
    cfg.validate()
    problem = get_problem(cfg.problem, **cfg.params)
    if problem.exact is None:
        raise UnsupportedModeError(
            f"problem {cfg.problem!r} has no exact solution for a convergence study")
    scfg = SolverConfig(k=cfg.k, use_kernels=cfg.use_kernels)
    scfg.recon.lam = cfg.lam
    scfg.recon.linear_mode = cfg.linear_weights
    T = problem.default_T if cfg.T is None else cfg.T
    report = ConvergenceReport(cfg.problem, cfg.k, T)
    for n in cfg.n:
        try:
            state, mesh, log, elapsed = _solve(problem, n, cfg, T=T)
            L1, L2, Li = error_norms(state, problem.exact, mesh, T, scfg)
            report.rows.append(ConvergenceRow(n, L1, L2, Li))
        except Exception as err:  # annotate and continue per the contract
            report.rows.append(ConvergenceRow(n, np.nan, np.nan, np.nan,
                                              note=f"{type(err).__name__}: {err}"))
    report.compute_orders()
    files = []
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        base = os.path.join(cfg.out, f"{cfg.problem}_k{cfg.k}_convergence")
        write_convergence_csv(report, base + ".csv", cfg.echo())
        files.append(base + ".csv")
        if cfg.figures:
            fp = render_convergence_figure(report, base + ".png")
            if fp:
                files.append(fp)
    return report, files
