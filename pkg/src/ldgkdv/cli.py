"""Command-line interface.

    ldgkdv solve --problem linear1d --k 2 --n 10,20,40 --mode convergence --out results/
    ldgkdv solve --problem kdv_single_soliton --n 160 --mode snapshots \
                 --snap-times 1,2 --out results/
    ldgkdv problems

Exit codes: 0 success, 2 configuration error, 3 numerical failure
(NaN / dt underflow), 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .harness import RunConfig, UnsupportedModeError, run_convergence, run_single
from .mesh import ConfigError
from .problems import UnknownProblemError, problem_names
from .semidiscrete import NumericalBlowupError
from .timestepping import DtUnderflowError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _parse_args(argv):
    parser = argparse.ArgumentParser(
        prog="ldgkdv",
        description="Moment-evolving LDG/HWENO solver for KdV-type equations")
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="run a problem")
    ps.add_argument("--config", help="JSON file with RunConfig keys; flags override")
    ps.add_argument("--problem", help="problem name (see `ldgkdv problems`)")
    ps.add_argument("--k", type=int, choices=(2, 3, 4))
    ps.add_argument("--n", help="resolution(s), comma separated (per-direction in 2D)")
    ps.add_argument("--T", type=float, help="final time override")
    ps.add_argument("--cfl", type=float, help="CFL safety factor")
    ps.add_argument("--lambda", dest="lam", type=float,
                    help="nonlinear-weight regularizer")
    ps.add_argument("--mode", choices=("single", "convergence", "snapshots"))
    ps.add_argument("--snap-times", help="comma-separated snapshot times")
    ps.add_argument("--out", help="output directory")
    ps.add_argument("--param", action="append", default=[],
                    metavar="KEY=VALUE", help="problem parameter override")
    ps.add_argument("--no-figures", action="store_true",
                    help="skip rendering PNG figures next to CSV outputs")
    ps.add_argument("--linear-weights", action="store_true",
                    help="debug mode: bypass the nonlinear weights")
    ps.add_argument("--no-kernels", action="store_true",
                    help="use the reference (pure numpy) pipeline")

    sub.add_parser("problems", help="list problem names")
    return parser.parse_args(argv)


def _build_config(args):
    base = {}
    if args.config:
        try:
            with open(args.config) as fh:
                base = json.load(fh)
        except OSError as err:
            raise ConfigError(f"cannot read config file: {err}")
        except json.JSONDecodeError as err:
            raise ConfigError(f"config file is not valid JSON: {err}")
    cfg = RunConfig()
    known = set(RunConfig.__dataclass_fields__)
    for key, val in base.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        setattr(cfg, key, tuple(val) if key in ("n", "snap_times") else val)
    if args.problem:
        cfg.problem = args.problem
    if args.k is not None:
        cfg.k = args.k
    if args.n:
        try:
            cfg.n = tuple(int(s) for s in args.n.split(","))
        except ValueError:
            raise ConfigError(f"bad --n value {args.n!r}")
    if args.T is not None:
        cfg.T = args.T
    if args.cfl is not None:
        cfg.cfl = args.cfl
    if args.lam is not None:
        cfg.lam = args.lam
    if args.mode:
        cfg.mode = args.mode
    if args.snap_times:
        try:
            cfg.snap_times = tuple(float(s) for s in args.snap_times.split(","))
        except ValueError:
            raise ConfigError(f"bad --snap-times value {args.snap_times!r}")
    if args.out:
        cfg.out = args.out
    for kv in args.param:
        if "=" not in kv:
            raise ConfigError(f"--param must be KEY=VALUE, got {kv!r}")
        key, val = kv.split("=", 1)
        try:
            cfg.params[key] = float(val)
        except ValueError:
            cfg.params[key] = val
    if args.no_figures:
        cfg.figures = False
    if args.linear_weights:
        cfg.linear_weights = True
    if args.no_kernels:
        cfg.use_kernels = False
    cfg.validate()
    return cfg


def _run_solve(cfg):
    if cfg.mode == "convergence":
        report, files = run_convergence(cfg)
        print(report.format_table())
        for f in files:
            print("wrote", f)
        if any(r.note for r in report.rows):
            return EXIT_NUMERICAL
        return EXIT_OK
    result = run_single(cfg)
    if "norms" in result:
        L1, L2, Li = result["norms"]
        print("t=%g  L1=%.6e  L2=%.6e  Linf=%.6e  (%.1fs, %d steps)"
              % (result["T"], L1, L2, Li, result["elapsed"], len(result["log"])))
    else:
        print("t=%g completed in %.1fs (%d steps)"
              % (result["T"], result["elapsed"], len(result["log"])))
    if result["log"]:
        print("conserved-sum drift: %.3e" % result["log"][-1].mass_drift)
    for f in result["files"]:
        print("wrote", f)
    return EXIT_OK


def main(argv=None):
    args = _parse_args(sys.argv[1:] if argv is None else argv)
    if args.command == "problems":
        for name in problem_names():
            print(name)
        return EXIT_OK
    try:
        cfg = _build_config(args)
        return _run_solve(cfg)
    except (ConfigError, UnknownProblemError, UnsupportedModeError, ValueError) as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalBlowupError, DtUnderflowError, FloatingPointError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as err:
        print(f"I/O error: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
