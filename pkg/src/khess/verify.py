"""Independent checks on computed profile pairs.

Everything here re-derives its quantities from exported arrays with plain
finite differences, deliberately avoiding the kernel machinery that
produced the solution, so agreement is evidence rather than tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classify import BoundEnvelope
from .problem import ValidatedProblem
from .quadrature import GridFunction, RadialGrid
from .solver import IterationTrace, SolutionPair

__all__ = [
    "ConvexityReport",
    "VerificationReport",
    "check_envelope",
    "check_monotone_iterates",
    "convexity_gap",
    "convexity_report",
    "hessian_forms_consistency",
    "ode_residual",
    "residual_maxima",
    "verification_report",
]

ENVELOPE_SLACK = 1e-6
MONOTONE_SLACK = 1e-12
CONVEXITY_SLACK = 1e-8
ORIGIN_NODES = 2  # first interior nodes where the slope/r limit convention applies


def _first_derivative(values: np.ndarray, nodes: np.ndarray, uniform: bool) -> np.ndarray:
    """Derivative of node samples; fourth-order centered inside on uniform
    grids (exact through cubics), second-order otherwise."""
    if not uniform or values.size < 7:
        return np.gradient(values, nodes, edge_order=2)
    h = nodes[1] - nodes[0]
    out = np.empty_like(values)
    out[2:-2] = (
        -values[4:] + 8.0 * values[3:-1] - 8.0 * values[1:-3] + values[:-4]
    ) / (12.0 * h)
    # one-sided edges at matching order, else their error leaks inward
    # through any second differencing and gets amplified near the origin
    head, tail = values[:5], values[-5:]
    out[0] = (
        -25.0 * head[0] + 48.0 * head[1] - 36.0 * head[2] + 16.0 * head[3] - 3.0 * head[4]
    ) / (12.0 * h)
    out[1] = (
        -3.0 * head[0] - 10.0 * head[1] + 18.0 * head[2] - 6.0 * head[3] + head[4]
    ) / (12.0 * h)
    out[-2] = (
        3.0 * tail[4] + 10.0 * tail[3] - 18.0 * tail[2] + 6.0 * tail[1] - tail[0]
    ) / (12.0 * h)
    out[-1] = (
        25.0 * tail[4] - 48.0 * tail[3] + 36.0 * tail[2] - 16.0 * tail[1] + 3.0 * tail[0]
    ) / (12.0 * h)
    return out


def ode_residual(
    problem: ValidatedProblem, solution: SolutionPair
) -> tuple[GridFunction, GridFunction]:
    """Pointwise defect of each component equation in eigenvalue form.

    The second derivative comes from centered differences of the exported
    slope.  At the first ``ORIGIN_NODES`` interior nodes the slope-over-
    radius ratio is replaced by the second derivative itself, the correct
    limit at the origin; those nodes are reported but carry the larger
    discretization error.
    """
    grid = solution.grid
    r = grid.nodes
    out = []
    for comp, u, du, partner in (
        (problem.component(1), solution.u1, solution.du1, solution.u2),
        (problem.component(2), solution.u2, solution.du2, solution.u1),
    ):
        k, binom = comp.order, comp.binom
        dim = problem.dim
        ddu = np.gradient(du.values, r, edge_order=2)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(r > 0, du.values / np.where(r > 0, r, 1.0), 0.0)
        ratio[: ORIGIN_NODES + 1] = ddu[: ORIGIN_NODES + 1]

        if comp.index == 1:
            f_val = comp.nonlinearity(u.values, partner.values)
        else:
            f_val = comp.nonlinearity(partner.values, u.values)
        residual = (
            binom * ddu * np.power(ratio, k - 1)
            + binom * ((dim - k) / k) * np.power(ratio, k)
            + comp.convection(r) * np.power(du.values, k)
            - comp.source(r) * f_val
        )
        out.append(GridFunction(grid, residual))
    return out[0], out[1]


def residual_maxima(
    problem: ValidatedProblem, solution: SolutionPair
) -> tuple[float, float, float, float]:
    """Interior residual maxima, splitting off the flagged origin nodes.

    Returns ``(max1, max2, origin1, origin2)`` where the first two run
    over interior nodes past the origin-convention zone and the last two
    over that zone.
    """
    res1, res2 = ode_residual(problem, solution)
    lo, hi = ORIGIN_NODES + 1, solution.grid.size - 1
    max1 = float(np.abs(res1.values[lo:hi]).max())
    max2 = float(np.abs(res2.values[lo:hi]).max())
    origin1 = float(np.abs(res1.values[1:lo]).max())
    origin2 = float(np.abs(res2.values[1:lo]).max())
    return max1, max2, origin1, origin2


def hessian_forms_consistency(
    grid: RadialGrid,
    profile: GridFunction,
    slope: GridFunction,
    order: int,
    dim: int,
) -> float:
    """Maximum gap between the divergence and eigenvalue forms.

    The divergence form differentiates ``r^(dim-order)/order * slope^order``
    and rescales.  The eigenvalue form is rebuilt from the profile alone:
    its slope comes from differentiating the profile, so the two routes
    share no data beyond the grid and a slope that drifts away from the
    profile's derivative widens the gap.  Nodes too close to the origin
    are excluded: the ``r^(1-dim)`` rescaling amplifies discretization
    error without bound there.
    """
    r = grid.nodes
    uniform = grid.is_uniform
    flux = np.power(r, dim - order) / order * np.power(slope.values, order)
    dflux = _first_derivative(flux, r, uniform)
    du = _first_derivative(profile.values, r, uniform)
    ddu = _first_derivative(du, r, uniform)

    binom_low = math.comb(dim - 1, order - 1)
    binom_high = math.comb(dim - 1, order)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(r > 0, du / np.where(r > 0, r, 1.0), 0.0)
        divergence = np.power(np.where(r > 0, r, 1.0), 1 - dim) * binom_low * dflux
    eigen = binom_high * np.power(ratio, order) + binom_low * ddu * np.power(
        ratio, order - 1
    )
    interior = slice(3, len(r) - 2)
    gap = np.abs(divergence[interior] - eigen[interior])
    return float(gap.max())


def check_envelope(
    solution: SolutionPair, env: BoundEnvelope, slack: float = ENVELOPE_SLACK
) -> tuple[bool, float]:
    """Whether the pair respects the envelope, and the worst signed margin.

    The margin is the smallest of ``u_i - lower_i`` and
    ``upper - (u1 + u2)`` over all nodes; the check passes when it stays
    above ``-slack``.
    """
    if env.lower1.grid is not solution.grid and not np.array_equal(
        env.lower1.grid.nodes, solution.grid.nodes
    ):
        raise ValueError("envelope and solution live on different grids")
    margins = np.concatenate(
        (
            solution.u1.values - env.lower1.values,
            solution.u2.values - env.lower2.values,
            env.upper_sum.values - (solution.u1.values + solution.u2.values),
        )
    )
    worst = float(margins.min())
    return worst >= -slack, worst


def check_monotone_iterates(
    trace: IterationTrace, slack: float = MONOTONE_SLACK
) -> tuple[bool, float]:
    """Whether successive iterates never decrease, and the worst step."""
    worst = math.inf
    for (prev1, prev2), (next1, next2) in zip(trace.iterates, trace.iterates[1:]):
        worst = min(
            worst,
            float((next1 - prev1).min()),
            float((next2 - prev2).min()),
        )
    if not trace.iterates or len(trace.iterates) == 1:
        worst = 0.0
    return worst >= -slack, worst


@dataclass(frozen=True)
class ConvexityReport:
    """Sufficient-condition checks for convex profiles.

    ``criterion_i`` states that the source weight dominates the weighted
    running source integral; when it holds (and the convection weight is
    zero), the component profile is convex.  ``convex_i`` checks the
    second derivative of the computed profile directly.
    """

    criterion1: bool
    criterion2: bool
    convex1: bool
    convex2: bool
    worst_points: dict[str, tuple[float, float]]


def convexity_gap(
    problem: ValidatedProblem, index: int, grid: RadialGrid
) -> np.ndarray:
    """Per-node slack of one component's convexity criterion.

    Positive where the source weight dominates the rescaled running
    integral.  The running integral uses the volume variable r^dim/dim,
    so the power weight is handled exactly and the first cells carry no
    startup error for the r^(-dim) factor to blow up.  The origin entry
    is the r -> 0 limit of the criterion.
    """
    comp = problem.component(index)
    k, dim = comp.order, problem.dim
    r = grid.nodes
    source_vals = comp.source(r)
    volume = np.power(r, dim) / (dim * comp.norm_const)
    cell_means = 0.5 * (source_vals[1:] + source_vals[:-1])
    running = np.concatenate(([0.0], np.cumsum(cell_means * np.diff(volume))))
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = (
            comp.binom * ((dim - k) / k) * np.power(np.where(r > 0, r, 1.0), -dim)
            - comp.convection(r) * np.power(np.where(r > 0, r, 1.0), k - dim)
        )
    rhs = factor * running
    rhs[0] = comp.binom * ((dim - k) / k) * source_vals[0] / (dim * comp.norm_const)
    return source_vals - rhs


def convexity_report(
    problem: ValidatedProblem,
    solution: SolutionPair,
    slack: float = CONVEXITY_SLACK,
) -> ConvexityReport:
    """Evaluate the convexity criteria and the observed second derivatives."""
    grid = solution.grid
    r = grid.nodes
    flags = {}
    worst: dict[str, tuple[float, float]] = {}

    for comp, du in (
        (problem.component(1), solution.du1),
        (problem.component(2), solution.du2),
    ):
        name = f"criterion{comp.index}"
        gap_all = convexity_gap(problem, comp.index, grid)
        gap = gap_all[1:]
        rhs = comp.source(r)[1:] - gap
        tolerance = slack * np.maximum(1.0, np.abs(rhs))
        idx = int(np.argmin(gap + tolerance))
        flags[name] = bool((gap >= -tolerance).all())
        worst[name] = (float(r[1:][idx]), float(gap[idx]))

        ddu = np.gradient(du.values, r, edge_order=2)
        inner = ddu[1:-1]
        jdx = int(np.argmin(inner))
        flags[f"convex{comp.index}"] = bool((inner >= -slack).all())
        worst[f"convex{comp.index}"] = (float(r[1:-1][jdx]), float(inner[jdx]))

    return ConvexityReport(
        criterion1=flags["criterion1"],
        criterion2=flags["criterion2"],
        convex1=flags["convex1"],
        convex2=flags["convex2"],
        worst_points=worst,
    )


@dataclass(frozen=True)
class VerificationReport:
    """Bundle of all verification facts for one solved problem."""

    max_residual1: float
    max_residual2: float
    origin_residual1: float
    origin_residual2: float
    hessian_gap1: float
    hessian_gap2: float
    envelope_ok: bool | None
    envelope_worst_margin: float | None
    monotone_ok: bool | None
    monotone_worst_step: float | None
    convexity: ConvexityReport


def verification_report(
    problem: ValidatedProblem,
    solution: SolutionPair,
    env: BoundEnvelope | None = None,
    trace: IterationTrace | None = None,
) -> VerificationReport:
    """Run every applicable check on a solved pair."""
    max1, max2, origin1, origin2 = residual_maxima(problem, solution)
    gap1 = hessian_forms_consistency(
        solution.grid, solution.u1, solution.du1, problem.k1, problem.dim
    )
    gap2 = hessian_forms_consistency(
        solution.grid, solution.u2, solution.du2, problem.k2, problem.dim
    )
    env_ok = env_margin = None
    if env is not None:
        env_ok, env_margin = check_envelope(solution, env)
    mono_ok = mono_step = None
    if trace is not None:
        mono_ok, mono_step = check_monotone_iterates(trace)
    return VerificationReport(
        max_residual1=max1,
        max_residual2=max2,
        origin_residual1=origin1,
        origin_residual2=origin2,
        hessian_gap1=gap1,
        hessian_gap2=gap2,
        envelope_ok=env_ok,
        envelope_worst_margin=env_margin,
        monotone_ok=mono_ok,
        monotone_worst_step=mono_step,
        convexity=convexity_report(problem, solution),
    )
