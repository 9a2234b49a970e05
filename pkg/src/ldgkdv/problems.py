"""Catalog of benchmark problems: equation specs, initial data, exact
solutions, domains, boundaries, and default final times for the 1D/2D
KdV-type experiments (linear dispersion, KdV solitons, zero-dispersion limit,
2D linear, ZK waves, and the bell-shaped pulse equation)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .mesh import Boundary
from .semidiscrete import EquationSpec1D, EquationSpec2D


@dataclass
class ProblemDef:
    name: str
    dim: int
    eq: object
    domain: tuple                     # (a, b) or (ax, bx, ay, by)
    boundary: tuple                   # (Boundary,) or (Boundary, Boundary)
    u0: Callable
    exact: Optional[Callable]         # u(x, t) / u(x, y, t)
    default_T: float
    params: dict = field(default_factory=dict)
    quantitative: bool = True         # has an exact solution for error tables
    notes: str = ""


class UnknownProblemError(KeyError):
    pass


# ---------------------------------------------------------------- 1D problems

def _linear_1d(params):
    eq = EquationSpec1D.quadratic(fa=0.0, fb=0.0, gc=1.0)
    exact = lambda x, t: np.sin(x + t)
    return ProblemDef(
        name="linear1d", dim=1, eq=eq, domain=(0.0, 2.0 * np.pi),
        boundary=(Boundary.PERIODIC,),
        u0=lambda x: np.sin(x), exact=exact, default_T=1.0,
        notes="u_t + u_xxx = 0, exact sin(x + t)")


def _kdv_soliton(params):
    eq = EquationSpec1D.quadratic(fa=-3.0, fb=0.0, gc=1.0)
    def exact(x, t):
        return -2.0 / np.cosh(x - 4.0 * t) ** 2
    return ProblemDef(
        name="kdv_soliton", dim=1, eq=eq, domain=(-10.0, 12.0),
        boundary=(Boundary.PERIODIC,),
        u0=lambda x: exact(x, 0.0), exact=exact, default_T=0.5,
        notes="u_t - 3(u^2)_x + u_xxx = 0, soliton -2 sech^2(x - 4t)")


def _kdv_single_soliton(params):
    eps = params.get("eps", 5e-4)
    c = params.get("c", 0.3)
    x0 = params.get("x0", 0.5)
    kap = 0.5 * np.sqrt(c / eps)
    eq = EquationSpec1D.quadratic(fa=0.5, fb=0.0, gc=eps)
    def exact(x, t):
        return 3.0 * c / np.cosh(kap * (x - c * t - x0)) ** 2
    return ProblemDef(
        name="kdv_single_soliton", dim=1, eq=eq, domain=(0.0, 2.0),
        boundary=(Boundary.PERIODIC,),
        u0=lambda x: exact(x, 0.0), exact=exact, default_T=1.0,
        params=dict(eps=eps, c=c, x0=x0),
        quantitative=False,
        notes="single soliton of u_t + (u^2/2)_x + eps u_xxx = 0; "
              "exact traveling wave kept for peak tracking")


def _kdv_double_soliton(params):
    eps = params.get("eps", 4.84e-4)
    c1 = params.get("c1", 0.3)
    c2 = params.get("c2", 0.1)
    x1 = params.get("x1", 0.4)
    x2 = params.get("x2", 0.8)
    k1 = 0.5 * np.sqrt(c1 / eps)
    k2 = 0.5 * np.sqrt(c2 / eps)
    eq = EquationSpec1D.quadratic(fa=0.5, fb=0.0, gc=eps)
    def u0(x):
        return (3.0 * c1 / np.cosh(k1 * (x - x1)) ** 2
                + 3.0 * c2 / np.cosh(k2 * (x - x2)) ** 2)
    return ProblemDef(
        name="kdv_double_soliton", dim=1, eq=eq, domain=(0.0, 2.0),
        boundary=(Boundary.PERIODIC,),
        u0=u0, exact=None, default_T=2.0,
        params=dict(eps=eps, c1=c1, c2=c2, x1=x1, x2=x2),
        quantitative=False, notes="double soliton collision")


def _kdv_triple_splitting(params):
    eps = params.get("eps", 1e-4)
    eq = EquationSpec1D.quadratic(fa=0.5, fb=0.0, gc=eps)
    def u0(x):
        return (2.0 / 3.0) / np.cosh((x - 1.0) / np.sqrt(108.0 * eps)) ** 2
    return ProblemDef(
        name="kdv_triple_splitting", dim=1, eq=eq, domain=(0.0, 3.0),
        boundary=(Boundary.PERIODIC,),
        u0=u0, exact=None, default_T=2.0, params=dict(eps=eps),
        quantitative=False, notes="triple soliton splitting")


def _zero_dispersion(params):
    eps = params.get("eps", 1e-4)
    eq = EquationSpec1D.quadratic(fa=0.5, fb=0.0, gc=eps)
    return ProblemDef(
        name="zero_dispersion", dim=1, eq=eq, domain=(0.0, 1.0),
        boundary=(Boundary.PERIODIC,),
        u0=lambda x: 2.0 + 0.5 * np.sin(2.0 * np.pi * x), exact=None,
        default_T=0.5, params=dict(eps=eps), quantitative=False,
        notes="zero-dispersion limit: oscillatory post-shock zone")


# ---------------------------------------------------------------- 2D problems

def _linear_2d(params):
    eq = EquationSpec2D.quadratic(g11c=1.0, g22c=1.0)
    # travelling-phase check: d/dt sin(x+y+2t) = 2 cos = -(u_xxx + u_yyy)
    exact = lambda x, y, t: np.sin(x + y + 2.0 * t)
    return ProblemDef(
        name="linear2d", dim=2, eq=eq,
        domain=(0.0, 2.0 * np.pi, 0.0, 2.0 * np.pi),
        boundary=(Boundary.PERIODIC, Boundary.PERIODIC),
        u0=lambda x, y: np.sin(x + y), exact=exact, default_T=1.0,
        notes="u_t + u_xxx + u_yyy = 0, exact sin(x + y + 2t)")


def _zk_exact(c, eps, theta, x0, y0):
    kap = 0.5 * np.sqrt(c / eps)
    ct, st = np.cos(theta), np.sin(theta)
    def exact(x, y, t):
        z = (x - c * t - x0) * ct + (y - y0) * st
        return 3.0 * c / np.cosh(kap * z) ** 2
    return exact


def _zk_wave(params):
    c = params.get("c", 0.01)
    eps = params.get("eps", 0.01)
    theta = params.get("theta", 0.0)
    x0 = params.get("x0", 0.0)
    y0 = params.get("y0", 0.0)
    eq = EquationSpec2D.quadratic(fa1=0.5, g11c=eps, g21c=eps)
    exact = _zk_exact(c, eps, theta, x0, y0)
    return ProblemDef(
        name="zk_wave", dim=2, eq=eq, domain=(-16.0, 16.0, -16.0, 16.0),
        boundary=(Boundary.PERIODIC, Boundary.PERIODIC),
        u0=lambda x, y: exact(x, y, 0.0), exact=exact, default_T=1.0,
        params=dict(c=c, eps=eps, theta=theta, x0=x0, y0=y0),
        notes="ZK progressive wave, axis-aligned, doubly periodic")


def _zk_wave_oblique(params):
    c = params.get("c", 0.01)
    eps = params.get("eps", 0.01)
    theta = params.get("theta", np.pi / 12.0)
    x0 = params.get("x0", 16.0)
    y0 = params.get("y0", 8.0)
    eq = EquationSpec2D.quadratic(fa1=0.5, g11c=eps, g21c=eps)
    exact = _zk_exact(c, eps, theta, x0, y0)
    return ProblemDef(
        name="zk_wave_oblique", dim=2, eq=eq, domain=(0.0, 32.0, 0.0, 16.0),
        boundary=(Boundary.PERIODIC, Boundary.DIRICHLET_EXACT),
        u0=lambda x, y: exact(x, y, 0.0), exact=exact, default_T=1.0,
        params=dict(c=c, eps=eps, theta=theta, x0=x0, y0=y0),
        notes="ZK progressive wave at an angle; Dirichlet in y")


def _zk_single_wave(params):
    c = params.get("c", 1.0)
    eps = params.get("eps", 0.01)
    theta = params.get("theta", 0.0)
    x0 = params.get("x0", 2.5)
    y0 = params.get("y0", 4.0)
    eq = EquationSpec2D.quadratic(fa1=0.5, g11c=eps, g21c=eps)
    exact = _zk_exact(c, eps, theta, x0, y0)
    return ProblemDef(
        name="zk_single_wave", dim=2, eq=eq, domain=(0.0, 8.0, 0.0, 8.0),
        boundary=(Boundary.PERIODIC, Boundary.PERIODIC),
        u0=lambda x, y: exact(x, y, 0.0), exact=exact, default_T=3.0,
        params=dict(c=c, eps=eps, theta=theta, x0=x0, y0=y0),
        quantitative=False, notes="ZK wave propagation figure run")


def _zk_double_wave(params):
    eps = params.get("eps", 0.01)
    c1 = params.get("c1", 0.45)
    c2 = params.get("c2", 0.25)
    x1 = params.get("x1", 2.5)
    x2 = params.get("x2", 3.3)
    eq = EquationSpec2D.quadratic(fa1=0.5, g11c=eps, g21c=eps)
    k1 = 0.5 * np.sqrt(c1 / eps)
    k2 = 0.5 * np.sqrt(c2 / eps)
    def u0(x, y):
        return (3.0 * c1 / np.cosh(k1 * (x - x1)) ** 2
                + 3.0 * c2 / np.cosh(k2 * (x - x2)) ** 2)
    return ProblemDef(
        name="zk_double_wave", dim=2, eq=eq, domain=(0.0, 8.0, 0.0, 8.0),
        boundary=(Boundary.PERIODIC, Boundary.PERIODIC),
        u0=u0, exact=None, default_T=3.0,
        params=dict(eps=eps, c1=c1, c2=c2, x1=x1, x2=x2),
        quantitative=False, notes="ZK double-wave collision (theta = 0)")


# Coefficients of the cylindrically symmetric solitary (bell) pulse.
BELL_COEFFICIENTS = {
    2: -1.25529873, 4: 0.21722635, 6: 0.06452543, 8: 0.00540862,
    10: -0.00332515, 12: -0.00281281, 14: -0.00138352, 16: -0.00070289,
    18: -0.00020451, 20: -0.00003053,
}


def bell_pulse(x, y, t, c, x0=0.0, y0=0.0):
    """Bell-shaped pulse: (c/3) sum a_2n (cos(2n arccot(sqrt(c)/2 r)) - 1),
    r the distance from (x0 + c t, y0); arccot maps [0, inf) to (0, pi/2]."""
    if c <= 0:
        raise ValueError("pulse speed c must be positive")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = np.sqrt((x - c * t - x0) ** 2 + (y - y0) ** 2)
    ac = np.arctan2(1.0, 0.5 * np.sqrt(c) * r)
    out = np.zeros_like(r)
    for twon, a in BELL_COEFFICIENTS.items():
        out += a * (np.cos(twon * ac) - 1.0)
    return (c / 3.0) * out


def _bell_single(params):
    c = params.get("c", 4.0)
    x0 = params.get("x0", 10.0)
    y0 = params.get("y0", 16.0)
    eq = EquationSpec2D.quadratic(fa1=3.0, g11c=1.0, g21c=1.0)
    def exact(x, y, t):
        return bell_pulse(x, y, t, c, x0, y0)
    return ProblemDef(
        name="bell_single", dim=2, eq=eq, domain=(0.0, 32.0, 0.0, 32.0),
        boundary=(Boundary.DIRICHLET_EXACT, Boundary.DIRICHLET_EXACT),
        u0=lambda x, y: exact(x, y, 0.0), exact=exact, default_T=3.0,
        params=dict(c=c, x0=x0, y0=y0),
        quantitative=False,
        notes="u_t + (3u^2)_x + u_xxx + u_xyy = 0, single pulse; "
              "Dirichlet data from the exact pulse")


def _bell_collision(params, name, defaults, domain):
    c1 = params.get("c1", defaults["c1"])
    c2 = params.get("c2", defaults["c2"])
    x1 = params.get("x1", defaults["x1"])
    y1 = params.get("y1", defaults["y1"])
    x2 = params.get("x2", defaults["x2"])
    y2 = params.get("y2", defaults["y2"])
    eq = EquationSpec2D.quadratic(fa1=3.0, g11c=1.0, g21c=1.0)
    def two_pulses(x, y, t):
        return (bell_pulse(x, y, t, c1, x1, y1) + bell_pulse(x, y, t, c2, x2, y2))
    return ProblemDef(
        name=name, dim=2, eq=eq, domain=domain,
        boundary=(Boundary.DIRICHLET_EXACT, Boundary.DIRICHLET_EXACT),
        u0=lambda x, y: two_pulses(x, y, 0.0), exact=two_pulses,
        default_T=2.0,
        params=dict(c1=c1, c2=c2, x1=x1, y1=y1, x2=x2, y2=y2),
        quantitative=False,
        notes="two-pulse collision; boundary data from the translated "
              "two-pulse sum (far-field approximation)")


def _bell_direct_collision(params):
    return _bell_collision(params, "bell_direct_collision",
                           dict(c1=4.0, c2=1.0, x1=32.0, y1=32.0, x2=40.0, y2=32.0),
                           (0.0, 64.0, 0.0, 64.0))


def _bell_deviated_collision(params):
    return _bell_collision(params, "bell_deviated_collision",
                           dict(c1=4.0, c2=1.0, x1=8.0, y1=14.0, x2=16.0, y2=16.0),
                           (0.0, 32.0, 0.0, 32.0))


_FACTORIES = {
    "linear1d": _linear_1d,
    "kdv_soliton": _kdv_soliton,
    "kdv_single_soliton": _kdv_single_soliton,
    "kdv_double_soliton": _kdv_double_soliton,
    "kdv_triple_splitting": _kdv_triple_splitting,
    "zero_dispersion": _zero_dispersion,
    "linear2d": _linear_2d,
    "zk_wave": _zk_wave,
    "zk_wave_oblique": _zk_wave_oblique,
    "zk_single_wave": _zk_single_wave,
    "zk_double_wave": _zk_double_wave,
    "bell_single": _bell_single,
    "bell_direct_collision": _bell_direct_collision,
    "bell_deviated_collision": _bell_deviated_collision,
}


def problem_names():
    return sorted(_FACTORIES)


def get_problem(name, **params):
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise UnknownProblemError(
            f"unknown problem {name!r}; available: {', '.join(problem_names())}")
    return factory(params)


def problem_catalog():
    """All problems at default parameters."""
    return [get_problem(name) for name in problem_names()]
