"""Deterministic file output.

CSV floats are printed with 17 significant digits, JSON documents carry
``schema_version`` and replace non-finite numbers with ``null``, and key
order is fixed by construction, so repeated runs produce byte-identical
files.
"""

from __future__ import annotations

import json
import math
import os
from typing import Iterable

import numpy as np

from .classify import ClassificationReport
from .kernels import KernelTables
from .problem import ValidatedProblem
from .quadrature import LimitEstimate
from .solver import IterationTrace, SolutionPair
from .verify import VerificationReport

__all__ = [
    "SCHEMA_VERSION",
    "classification_document",
    "ensure_dir",
    "error_document",
    "format_float",
    "trace_document",
    "validation_document",
    "verification_document",
    "write_csv",
    "write_json",
    "write_kernel_csv",
    "write_ko_csv",
    "write_solution_csv",
    "write_xy",
]

SCHEMA_VERSION = "1"


def format_float(value: float) -> str:
    return "%.17g" % float(value)


def _clean(value):
    """Make a value JSON-safe: non-finite floats become null."""
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def write_json(path: str, document: dict) -> None:
    document = dict(document)
    document.setdefault("schema_version", SCHEMA_VERSION)
    # keep schema_version first for readability
    ordered = {"schema_version": document.pop("schema_version")}
    ordered.update(document)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(_clean(ordered), handle, indent=2)
        handle.write("\n")


def write_csv(path: str, header: str, columns: Iterable[np.ndarray]) -> None:
    columns = [np.asarray(c, dtype=float) for c in columns]
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(header + "\n")
        for row in zip(*columns):
            handle.write(",".join(format_float(v) for v in row) + "\n")


def write_xy(path: str, x: np.ndarray, y: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for xa, ya in zip(x, y):
            handle.write(f"{format_float(xa)} {format_float(ya)}\n")


def write_solution_csv(path: str, solution: SolutionPair) -> None:
    write_csv(
        path,
        "r,u1,u2,du1,du2",
        (
            solution.grid.nodes,
            solution.u1.values,
            solution.u2.values,
            solution.du1.values,
            solution.du2.values,
        ),
    )


def write_kernel_csv(path: str, tables: KernelTables) -> None:
    write_csv(
        path,
        "r,E1,E2,P1,P2",
        (
            tables.grid.nodes,
            tables.exponent1.values,
            tables.exponent2.values,
            tables.budget1.values,
            tables.budget2.values,
        ),
    )


def write_ko_csv(path: str, tables: KernelTables) -> None:
    nodes, values = tables.require_ko()
    write_csv(path, "s,F12", (nodes, values))


def _limit_document(limit: LimitEstimate) -> dict:
    return {
        "verdict": limit.verdict,
        "value": limit.value,
        "error_bound": limit.error_bound,
        "evidence": limit.evidence,
        "windows_used": limit.windows_used,
    }


def classification_document(report: ClassificationReport) -> dict:
    return {
        "verdict": report.verdict,
        "growth_rate_limit": _limit_document(report.ko_limit),
        "growth_budget1_limit": _limit_document(report.budget1_limit),
        "growth_budget2_limit": _limit_document(report.budget2_limit),
        "theorem2_margin": report.theorem2_margin,
        "error_budget": report.error_budget,
    }


def validation_document(problem: ValidatedProblem) -> dict:
    return {
        "N": problem.dim,
        "k1": problem.k1,
        "k2": problem.k2,
        "a1": problem.a1,
        "a2": problem.a2,
        "C0": problem.norm_const1,
        "C00": problem.norm_const2,
        "binom1": problem.binom1,
        "binom2": problem.binom2,
        "f1_nondecreasing": problem.monotone_report1.is_nondecreasing_u
        and problem.monotone_report1.is_nondecreasing_v,
        "f2_nondecreasing": problem.monotone_report2.is_nondecreasing_u
        and problem.monotone_report2.is_nondecreasing_v,
        "ko_denominator_positive": problem.ko_denominator_positive,
        "functions": {
            "b1": problem.b1.source,
            "b2": problem.b2.source,
            "p1": problem.p1.source,
            "p2": problem.p2.source,
            "f1": problem.f1.source,
            "f2": problem.f2.source,
        },
    }


def trace_document(trace: IterationTrace) -> dict:
    return {
        "converged": trace.converged,
        "sweeps": trace.sweeps,
        "sup_deltas": [float(d) for d in trace.sup_deltas],
    }


def verification_document(report: VerificationReport) -> dict:
    return {
        "max_residual1": report.max_residual1,
        "max_residual2": report.max_residual2,
        "origin_residual1": report.origin_residual1,
        "origin_residual2": report.origin_residual2,
        "hessian_gap1": report.hessian_gap1,
        "hessian_gap2": report.hessian_gap2,
        "envelope_ok": report.envelope_ok,
        "envelope_worst_margin": report.envelope_worst_margin,
        "monotone_ok": report.monotone_ok,
        "monotone_worst_step": report.monotone_worst_step,
        "convexity": {
            "criterion1": report.convexity.criterion1,
            "criterion2": report.convexity.criterion2,
            "convex1": report.convexity.convex1,
            "convex2": report.convexity.convex2,
            "worst_points": {
                name: list(point)
                for name, point in sorted(report.convexity.worst_points.items())
            },
        },
    }


def ensure_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def error_document(exc: BaseException) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "error": {"type": type(exc).__name__, "message": str(exc)},
    }
