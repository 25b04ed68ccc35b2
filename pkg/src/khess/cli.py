"""Command line front end.

Subcommands: ``validate``, ``solve``, ``classify``, ``verify``, ``sweep``.
Exit codes: 0 success, 1 usage or configuration problems, 2 numerical
failures, 3 structural hypothesis violations.  Machine-readable errors go
to stderr as JSON; result files land in the configured output directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .classify import classify, envelope
from .config import RunConfig, load_config
from .errors import (
    ConfigError,
    EvaluationDomainError,
    HypothesisViolationError,
    KhessError,
    NumericalFailureError,
)
from .kernels import build_tables
from .output import (
    classification_document,
    ensure_dir,
    error_document,
    format_float,
    trace_document,
    validation_document,
    verification_document,
    write_csv,
    write_json,
    write_kernel_csv,
    write_ko_csv,
    write_solution_csv,
    write_xy,
)
from .problem import validate_problem
from .solver import solve_successive
from .verify import convexity_gap, ode_residual, verification_report

__all__ = ["main", "run_cli"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_HYPOTHESIS = 3


class _ArgumentParser(argparse.ArgumentParser):
    """Raise instead of exiting so the caller owns the exit code."""

    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="khess",
        description="Radial Hessian-system profiles: solve, classify, verify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("validate", "check hypotheses and print derived constants"),
        ("solve", "run successive approximation and export the profiles"),
        ("classify", "decide boundedness from limit facts at infinity"),
        ("verify", "solve, then re-check the result independently"),
        ("sweep", "repeat an action over a parameter range"),
    ):
        cmd = sub.add_parser(name, help=text, description=text)
        cmd.add_argument("config_positional", nargs="?", metavar="CONFIG",
                         help="path to the INI configuration")
        cmd.add_argument("--config", dest="config_flag", metavar="PATH",
                         help="path to the INI configuration")
        cmd.add_argument("--out", metavar="DIR", help="output directory override")
        cmd.add_argument("--tol", type=float, help="sup-norm tolerance override")
        cmd.add_argument("--nodes", type=int, help="grid node count override")
        cmd.add_argument("--radius", type=float, help="domain radius override")
        cmd.add_argument("--seed-table-smax", type=float, dest="s_max",
                         help="growth-rate table upper endpoint override")
    return parser


def _load(args) -> RunConfig:
    path = args.config_flag or args.config_positional
    if not path:
        raise ConfigError("a configuration file is required (positional or --config)")
    cfg = load_config(path)
    return cfg.with_overrides(
        tol=args.tol,
        nodes=args.nodes,
        radius=args.radius,
        s_max=args.s_max,
        out_dir=args.out,
    )


def _cmd_validate(cfg: RunConfig) -> int:
    problem = validate_problem(cfg.problem)
    print(f"N={problem.dim} k1={problem.k1} k2={problem.k2}")
    print(f"C0={format_float(problem.norm_const1)} C00={format_float(problem.norm_const2)}")
    print(f"binomials: C(N-1,k1-1)={problem.binom1} C(N-1,k2-1)={problem.binom2}")
    print(f"centers: a1={format_float(problem.a1)} a2={format_float(problem.a2)}")
    print(
        "f1 nondecreasing: "
        f"{problem.monotone_report1.is_nondecreasing_u and problem.monotone_report1.is_nondecreasing_v}"
    )
    print(
        "f2 nondecreasing: "
        f"{problem.monotone_report2.is_nondecreasing_u and problem.monotone_report2.is_nondecreasing_v}"
    )
    print(f"growth denominator positive: {problem.ko_denominator_positive}")
    if "json" in cfg.formats:
        out = ensure_dir(cfg.out_dir)
        write_json(os.path.join(out, "validate.json"), validation_document(problem))
    return EXIT_OK


def _solve(cfg: RunConfig):
    problem = validate_problem(cfg.problem)
    grid = cfg.make_grid()
    solution, trace = solve_successive(
        problem,
        grid,
        tol=cfg.tol,
        max_sweeps=cfg.max_sweeps,
        blowup_ceiling=cfg.blowup_ceiling,
    )
    return problem, grid, solution, trace


def _cmd_solve(cfg: RunConfig) -> int:
    problem, grid, solution, trace = _solve(cfg)
    out = ensure_dir(cfg.out_dir)
    if "csv" in cfg.formats:
        write_solution_csv(os.path.join(out, "solution.csv"), solution)
    if "json" in cfg.formats:
        write_json(os.path.join(out, "trace.json"), trace_document(trace))
    if cfg.plot_data:
        write_xy(os.path.join(out, "u1.dat"), grid.nodes, solution.u1.values)
        write_xy(os.path.join(out, "u2.dat"), grid.nodes, solution.u2.values)
        write_xy(os.path.join(out, "du1.dat"), grid.nodes, solution.du1.values)
        write_xy(os.path.join(out, "du2.dat"), grid.nodes, solution.du2.values)
    state = "converged" if trace.converged else "did not converge"
    print(
        f"{state} after {trace.sweeps} sweep(s); "
        f"u1({format_float(grid.radius)})={format_float(solution.u1.values[-1])} "
        f"u2({format_float(grid.radius)})={format_float(solution.u2.values[-1])}"
    )
    if not trace.converged:
        print(
            json.dumps(
                error_document(
                    NumericalFailureError(
                        f"no convergence within {cfg.max_sweeps} sweeps; "
                        f"last sup-norm step {trace.sup_deltas[-1]!r}"
                    )
                )
            ),
            file=sys.stderr,
        )
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_classify(cfg: RunConfig) -> int:
    problem = validate_problem(cfg.problem)
    report = classify(problem, cfg.limit_policy())
    out = ensure_dir(cfg.out_dir)
    if "json" in cfg.formats:
        write_json(
            os.path.join(out, "classification.json"), classification_document(report)
        )
    print(f"verdict: {report.verdict}")
    for label, limit in (
        ("growth rate", report.ko_limit),
        ("budget 1", report.budget1_limit),
        ("budget 2", report.budget2_limit),
    ):
        value = "" if limit.value is None else f" value={format_float(limit.value)}"
        print(f"  {label}: {limit.verdict}{value}")
    if report.theorem2_margin is not None:
        print(f"  margin: {format_float(report.theorem2_margin)}")
    return EXIT_OK


def _cmd_verify(cfg: RunConfig) -> int:
    problem, grid, solution, trace = _solve(cfg)
    if not trace.converged:
        raise NumericalFailureError(
            f"verification needs a converged solution; no convergence within "
            f"{cfg.max_sweeps} sweeps (last step {trace.sup_deltas[-1]!r})"
        )
    tables = build_tables(problem, grid, s_max=cfg.s_max, with_limits=False)
    env = envelope(problem, tables)
    report = verification_report(problem, solution, env, trace)
    out = ensure_dir(cfg.out_dir)
    if "json" in cfg.formats:
        write_json(
            os.path.join(out, "verification.json"), verification_document(report)
        )
    if "csv" in cfg.formats:
        write_kernel_csv(os.path.join(out, "kernels.csv"), tables)
        write_ko_csv(os.path.join(out, "growth_rate.csv"), tables)
        res1, res2 = ode_residual(problem, solution)
        gap1 = convexity_gap(problem, 1, grid)
        gap2 = convexity_gap(problem, 2, grid)
        ddu1 = np.gradient(solution.du1.values, grid.nodes, edge_order=2)
        ddu2 = np.gradient(solution.du2.values, grid.nodes, edge_order=2)
        write_csv(
            os.path.join(out, "verify.csv"),
            "r,residual1,residual2,criterion_gap1,criterion_gap2,ddu1,ddu2",
            (grid.nodes, res1.values, res2.values, gap1, gap2, ddu1, ddu2),
        )
    if cfg.plot_data:
        write_xy(os.path.join(out, "envelope_upper.dat"), grid.nodes, env.upper_sum.values)
        write_xy(os.path.join(out, "envelope_lower1.dat"), grid.nodes, env.lower1.values)
        write_xy(os.path.join(out, "envelope_lower2.dat"), grid.nodes, env.lower2.values)
    print(
        f"residual max: {format_float(max(report.max_residual1, report.max_residual2))}; "
        f"envelope_ok={report.envelope_ok}; monotone_ok={report.monotone_ok}"
    )
    return EXIT_OK


_SWEEP_ACTIONS = {
    "validate": _cmd_validate,
    "solve": _cmd_solve,
    "classify": _cmd_classify,
    "verify": _cmd_verify,
}


def _cmd_sweep(cfg: RunConfig) -> int:
    if cfg.sweep is None:
        raise ConfigError("sweep needs a [sweep] section in the configuration")
    spec = cfg.sweep
    action = _SWEEP_ACTIONS[spec.action]
    base_out = ensure_dir(cfg.out_dir)

    def run_item(item):
        index, value = item
        item_dir = os.path.join(base_out, f"item_{index:03d}")
        try:
            item_cfg = cfg.resweep(spec.parameter, value)
            item_cfg = item_cfg.with_overrides(out_dir=item_dir)
            code = action(item_cfg)
            return index, value, code, None
        except KhessError as exc:
            ensure_dir(item_dir)
            write_json(os.path.join(item_dir, "error.json"), error_document(exc))
            return index, value, _exit_code_for(exc), type(exc).__name__

    items = list(enumerate(spec.values))
    workers = max(1, spec.parallel)
    if workers == 1:
        results = [run_item(item) for item in items]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_item, items))
    results.sort(key=lambda t: t[0])

    with open(os.path.join(base_out, "sweep_index.csv"), "w", encoding="utf-8") as handle:
        handle.write("index,parameter,value,exit_code,error\n")
        for index, value, code, err in results:
            handle.write(f"{index},{spec.parameter},{value},{code},{err or ''}\n")
    worst = max((code for _, _, code, _ in results), default=EXIT_OK)
    print(f"sweep finished: {len(results)} item(s), worst exit code {worst}")
    return worst


def _exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (HypothesisViolationError, EvaluationDomainError)):
        return EXIT_HYPOTHESIS
    if isinstance(exc, NumericalFailureError):
        return EXIT_NUMERICAL
    if isinstance(exc, ConfigError):
        return EXIT_USAGE
    return EXIT_NUMERICAL


_COMMANDS = {
    "validate": _cmd_validate,
    "solve": _cmd_solve,
    "classify": _cmd_classify,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _load(args)
        return _COMMANDS[args.command](cfg)
    except KhessError as exc:
        print(json.dumps(error_document(exc)), file=sys.stderr)
        return _exit_code_for(exc)


def main() -> None:
    sys.exit(run_cli())
