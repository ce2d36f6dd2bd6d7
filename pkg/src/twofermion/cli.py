"""Command-line front end.

Subcommands: ``solve``, ``scan``, ``mass``, ``kinematics``, ``check``.
Exit codes: 0 success, 1 usage or configuration error, 2 computational failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .checks import all_passed, run_checks
from .constants import ConfigError, CouplingConfig, load_config
from .cubic import VARIANTS, Variant
from .kinematics import ConvergenceError, solve_f
from .roots import DEFAULT_BRACKETS, DEFAULT_GRID, BranchCrossingError, branch_scan, minimize_branch
from .spectrum import (
    SingularDenominatorError,
    mass_derived,
    mass_discrepancy_report,
    mass_printed,
    rest_frame_residual,
    solve_states,
)

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2
EXIT_CHECK_FAILED = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _vector(text):
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    if len(parts) != 3 or not all(np.isfinite(parts)):
        raise argparse.ArgumentTypeError(f"expected three finite numbers, got {text!r}")
    return parts


def _add_config_flags(p):
    p.add_argument("--config", type=Path, help="JSON config file")
    p.add_argument("--alpha-mode", choices=["paper", "codata", "custom"])
    p.add_argument("--alpha", type=float, help="fine-structure constant (custom mode)")
    p.add_argument("--electron-rest-energy", type=float, help="mc^2 in eV")
    p.add_argument("--output", "-o", type=Path, help="write result here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twofermion", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="closed-form and variational bound states")
    _add_config_flags(p)
    p.add_argument("--variant", choices=["printed", "derived", "both"], default="both")

    p = sub.add_parser("scan", help="root branches E1, E2, E3 over a beta grid (CSV)")
    _add_config_flags(p)
    p.add_argument("--beta-min", type=float, default=DEFAULT_GRID[0])
    p.add_argument("--beta-max", type=float, default=DEFAULT_GRID[1])
    p.add_argument("--steps", type=int, default=DEFAULT_GRID[2])
    p.add_argument("--spacing", choices=["log", "linear"], default="log",
                   help="grid spacing (linear is forced when beta-min is 0)")
    p.add_argument("--variant", choices=["printed", "derived"], default="derived")

    p = sub.add_parser("mass", help="bound-system mass from both formulas")
    _add_config_flags(p)
    p.add_argument("--state", choices=["1s", "deep"])
    p.add_argument("--E", type=float, dest="E")
    p.add_argument("--beta", type=float)
    p.add_argument("--variant", choices=["printed", "derived", "both"], default="both")

    p = sub.add_parser("kinematics", help="solve the relative-momentum constraint")
    _add_config_flags(p)
    p.add_argument("--s", type=_vector, required=True, metavar="X,Y,Z")
    p.add_argument("--g", type=_vector, required=True, metavar="X,Y,Z")
    p.add_argument("--m1", type=float, default=1.0)
    p.add_argument("--m2", type=float, default=1.0)

    p = sub.add_parser("check", help="run every oracle cross-validation")
    _add_config_flags(p)
    p.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def resolve_config(args) -> CouplingConfig:
    base = load_config(args.config) if args.config else CouplingConfig()
    mode = args.alpha_mode or base.alpha_mode.value
    if args.alpha is not None and mode != "custom":
        raise ConfigError("--alpha requires --alpha-mode custom")
    alpha = args.alpha if args.alpha is not None else base.alpha
    mc2 = args.electron_rest_energy if args.electron_rest_energy is not None else base.electron_rest_energy
    return CouplingConfig.from_mode(mode, alpha, mc2)


def _variants(choice):
    return VARIANTS if choice == "both" else (Variant(choice),)


def _inputs(args):
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items())}


def _emit(args, text):
    if args.output:
        args.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_solve(args, cfg):
    variants = _variants(args.variant)
    states, minima, errors = solve_states(cfg, variants)
    violations = [v for st in states for v in st.class_violations()]
    results = {
        "states": states,
        "branch_minima": minima,
        "errors": errors,
        "class_violations": violations,
        "rest_frame_residuals": [
            {"label": st.label, "variant": st.variant, **rest_frame_residual(st.E, st.beta, cfg.alpha)}
            for st in states
        ],
    }
    _emit(args, io.document(io.manifest("solve", cfg, variants, _inputs(args)), results))
    return EXIT_COMPUTE if errors else EXIT_OK


def _grid(args):
    if args.steps < 1:
        raise UsageError("--steps must be at least 1")
    lo, hi = args.beta_min, args.beta_max
    if args.steps == 1:
        if lo != hi:
            raise UsageError("--steps 1 needs --beta-min equal to --beta-max")
        return np.array([lo])
    if not hi > lo:
        raise UsageError("--beta-max must exceed --beta-min")
    if args.spacing == "linear" or lo == 0.0:
        return np.linspace(lo, hi, args.steps)
    return np.geomspace(lo, hi, args.steps)


def cmd_scan(args, cfg):
    grid = _grid(args)
    variant = Variant(args.variant)
    try:
        table = branch_scan(cfg.alpha, variant, grid)
    except ValueError as exc:
        raise UsageError(str(exc))
    except BranchCrossingError as exc:
        print(f"twofermion scan: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    man = io.dumps(io.manifest("scan", cfg, [variant], _inputs(args)))
    if args.output:
        args.output.write_text(io.scan_csv(table), encoding="utf-8")
        Path(str(args.output) + ".manifest.json").write_text(man, encoding="utf-8")
    else:
        sys.stdout.write(io.scan_csv(table))
        sys.stderr.write(man)
    return EXIT_OK


def _mass_pair(E, beta, alpha):
    out, failed = {"E": E, "beta": beta}, False
    for fn, key in ((mass_printed, "mass_printed"), (mass_derived, "mass_derived")):
        try:
            out[key] = fn(E, beta, alpha)
        except (SingularDenominatorError, ValueError) as exc:
            out[key] = {"error": str(exc)}
            failed = True
    return out, failed


def cmd_mass(args, cfg):
    custom = args.E is not None or args.beta is not None
    if custom == (args.state is not None):
        raise UsageError("give either --state or both --E and --beta")
    variants = _variants(args.variant)
    entries, failed = [], False
    if custom:
        if args.E is None or args.beta is None:
            raise UsageError("--E and --beta must be given together")
        entry, bad = _mass_pair(args.E, args.beta, cfg.alpha)
        entries.append({"source": "custom", **entry})
        failed |= bad
    else:
        branch = 1 if args.state == "1s" else 2
        for variant in variants:
            try:
                bm = minimize_branch(cfg.alpha, variant, branch, DEFAULT_BRACKETS[branch])
            except (RuntimeError, ValueError) as exc:
                entries.append({"source": f"{variant.value} cubic, branch {branch}", "error": str(exc)})
                failed = True
                continue
            entry, bad = _mass_pair(bm.E_star, bm.beta_star, cfg.alpha)
            entries.append({"source": f"{variant.value} cubic, branch {branch}",
                            "branch_minimum": bm, **entry})
            failed |= bad
    results = {"masses": entries, "discrepancy_report": mass_discrepancy_report(cfg=cfg)}
    _emit(args, io.document(io.manifest("mass", cfg, variants, _inputs(args)), results))
    return EXIT_COMPUTE if failed else EXIT_OK


def cmd_kinematics(args, cfg):
    try:
        sample = solve_f(args.s, args.g, args.m1, args.m2)
    except ConvergenceError as exc:
        print(f"twofermion kinematics: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except ValueError as exc:
        raise UsageError(str(exc))
    _emit(args, io.document(io.manifest("kinematics", cfg, [], _inputs(args)), sample))
    return EXIT_OK


def cmd_check(args, cfg):
    results = run_checks(args.perturb)
    ok = all_passed(results)
    for r in results:
        if not r["passed"]:
            print(f"twofermion check: FAILED {r['name']}", file=sys.stderr)
    _emit(args, io.document(io.manifest("check", cfg, list(VARIANTS), _inputs(args)),
                            {"all_passed": ok, "checks": results}))
    return EXIT_OK if ok else EXIT_CHECK_FAILED


COMMANDS = {
    "solve": cmd_solve,
    "scan": cmd_scan,
    "mass": cmd_mass,
    "kinematics": cmd_kinematics,
    "check": cmd_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](args, cfg)
    except (ConfigError, UsageError) as exc:
        print(f"twofermion {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
