"""Moment-evolving local DG solver with Hermite-WENO reconstruction for
KdV-type dispersive equations in one and two dimensions."""

from .basis import (Basis1D, Basis2D, GaussRule, UnsupportedOrderError,
                    eval_basis, gauss_rule, project_cell_averages_1d,
                    project_cell_averages_2d)
from .harness import (ConvergenceReport, RunConfig, error_norms, emit_profile,
                      run_convergence, run_single)
from .ldg import llf_flux, llf_flux_g, rprime_hat, solve_p_1d, solve_q_1d
from .mesh import (Boundary, ConfigError, Mesh1D, Mesh2D, build_mesh_1d,
                   build_mesh_2d, fill_ghosts_1d, fill_ghosts_2d)
from .problems import (BELL_COEFFICIENTS, ProblemDef, UnknownProblemError,
                       bell_pulse, get_problem, problem_catalog, problem_names)
from .reconstruct import (PointWeights, ReconstructionConfig, StencilPolys,
                          build_stencil_polys, linear_weights,
                          reconstruct_point, smoothness_indicators)
from .semidiscrete import (EquationSpec1D, EquationSpec2D, MomentField1D,
                           MomentField2D, NumericalBlowupError, SolverConfig,
                           rhs_1d, rhs_2d)
from .timestepping import TimeControls, advance, compute_dt, rk3_step

__version__ = "0.1.0"
