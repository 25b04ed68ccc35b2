"""Integral kernels of the radial system.

For one component with Hessian order ``k`` in dimension ``N``, the radial
slope of a candidate profile driven by a nonnegative load ``w`` is

    slope(r, w) = ( r^(k-N)/C * integral_0^r t^(N-1)
                    * exp(E(t) - E(r)) * p(t) * w(t) dt )^(1/k)

where ``E`` is the running convection exponent ``integral of t^(k-1) b(t)/C``
and ``C`` the radial normalization constant.  Only exponent *differences*
are ever exponentiated; accumulation runs in log space, so strongly
convective problems cannot overflow through ``exp(E)``.

On top of the slope kernel sit the growth budget (its integral with unit
load), the Keller-Osserman growth-rate integral with its monotone inverse,
and doubling-window limit facts for all three at infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import (
    EvaluationDomainError,
    HypothesisViolationError,
    KernelOverflowError,
    NumericalFailureError,
    TableRangeError,
)
from .problem import ValidatedProblem
from .quadrature import (
    GridFunction,
    LimitEstimate,
    LimitPolicy,
    RadialGrid,
    adaptive_integral,
    cumulative_integral,
    estimate_limit,
    limit_from_windows,
)

__all__ = [
    "KernelTables",
    "SlopeOperator",
    "TailLimits",
    "build_tables",
    "convection_exponent_table",
    "growth_budget_table",
    "keller_osserman_inverse",
    "keller_osserman_table",
    "slope_kernel",
    "tail_limits",
]

# Gauss-Legendre positions on the unit interval
_G = np.array([0.5 - math.sqrt(3.0) / 6.0, 0.5 + math.sqrt(3.0) / 6.0])

_KO_RULE_MAIN = leggauss(7)
_KO_RULE_CHECK = leggauss(4)


def _exponent_integrand(comp):
    """t^(k-1) b(t) / C as a vectorized callable."""
    k, c_norm, b = comp.order, comp.norm_const, comp.convection

    def beta(t):
        t = np.asarray(t, dtype=float)
        return np.power(t, k - 1) * b(t) / c_norm

    return beta


def convection_exponent_table(
    problem: ValidatedProblem, index: int, grid: RadialGrid
) -> GridFunction:
    """Running convection exponent at the grid nodes."""
    comp = problem.component(index)
    beta = _exponent_integrand(comp)
    return cumulative_integral(GridFunction(grid, beta(grid.nodes)))


class SlopeOperator:
    """Discrete slope kernel for one component on a fixed grid.

    Precomputes everything that does not depend on the load ``w``: Gauss
    points, source and convection samples, exponent differences.  After
    that, ``apply(w)`` is a handful of vector operations, each load
    integral being a nonnegative linear form in the nodal loads (the load
    is interpolated linearly between nodes).  The log-space running sum
    realizes the exponent-difference rule: every materialized exponential
    has a nonpositive argument.

    The first few intervals are handled with exact monomial moments of
    ``t^(N-1)`` against an endpoint-linear fit of the smooth factor, which
    keeps the origin accurate for every dimension without giving up the
    nonnegative-coefficient structure.
    """

    def __init__(self, problem: ValidatedProblem, index: int, grid: RadialGrid):
        comp = problem.component(index)
        self.index = index
        self.order = k = comp.order
        self.dim = dim = problem.dim
        self.grid = grid
        self.norm_const = c_norm = comp.norm_const

        beta = _exponent_integrand(comp)
        source = comp.source

        r = grid.nodes
        rm, rp = r[:-1], r[1:]
        h = rp - rm
        x = rm[:, None] + _G[None, :] * h[:, None]  # (M, 2) interval Gauss points

        # running exponent at nodes, one Gauss pair per interval
        d_exp = 0.5 * h * beta(x).sum(axis=1)
        exp_nodes = np.concatenate(([0.0], np.cumsum(d_exp)))
        self.exp_nodes = exp_nodes

        # exponent at the interval Gauss points (local increments from rm)
        span_x = x - rm[:, None]
        xg = rm[:, None, None] + _G[None, None, :] * span_x[:, :, None]  # (M, 2, 2)
        exp_x = exp_nodes[:-1, None] + 0.5 * span_x * beta(xg).sum(axis=2)

        # load integral over a full interval: coefficients of (w_m, w_{m+1})
        p_x = source(x)
        with np.errstate(over="ignore"):
            val = (
                0.5
                * h[:, None]
                * np.power(x, dim - 1)
                * p_x
                * np.exp(np.minimum(exp_x - exp_nodes[1:, None], 0.0))
            )
        self.full_left = (val * (1.0 - _G)).sum(axis=1)
        self.full_right = (val * _G).sum(axis=1)

        # partial load integral from rm to each Gauss point: the inner
        # Gauss points of [rm, x] are exactly xg again
        p_y = source(xg)
        exp_y = (
            exp_nodes[:-1, None, None]
            + 0.5 * (xg - rm[:, None, None]) * beta(
                rm[:, None, None, None]
                + _G[None, None, None, :] * (xg - rm[:, None, None])[:, :, :, None]
            ).sum(axis=3)
        )
        lam = (rp[:, None, None] - xg) / h[:, None, None]
        with np.errstate(over="ignore"):
            pval = (
                0.5
                * span_x[:, :, None]
                * np.power(xg, dim - 1)
                * p_y
                * np.exp(np.minimum(exp_y - exp_x[:, :, None], 0.0))
            )
        self.part_left = (pval * lam).sum(axis=2)
        self.part_right = (pval * (1.0 - lam)).sum(axis=2)

        # near the origin the weight t^(N-1) bends too fast for the Gauss
        # pair once N > 4, so the first few intervals instead fit the
        # smooth factor linearly between the endpoints and integrate the
        # weight times the endpoint basis exactly (monomial moments); the
        # basis is nonnegative on the interval, so the coefficient
        # structure survives, and exponent gaps there are small running
        # totals, safe to exponentiate directly.  For N <= 4 the Gauss
        # pair already handles the weight, so only the interval at zero
        # needs the moment treatment
        early = min(len(h), 1 if dim <= 4 else 8)
        sl = slice(0, early)
        u_lo, v_hi = rm[sl], rp[sl]
        p_lo = source(u_lo)
        p_hi = source(v_hi)
        drop_full = np.exp(exp_nodes[:-1][sl] - exp_nodes[1:][sl])

        def moment_pair(upper):
            """Integrals of t^(N-1) times each endpoint basis over [u_lo, upper]."""
            shape = upper.shape[:1] + (1,) * (upper.ndim - 1)
            u_ = u_lo.reshape(shape)
            v_ = v_hi.reshape(shape)
            h_ = h[sl].reshape(shape)
            s_n = (np.power(upper, dim) - np.power(u_, dim)) / dim
            s_n1 = (np.power(upper, dim + 1) - np.power(u_, dim + 1)) / (dim + 1)
            return (v_ * s_n - s_n1) / h_, (s_n1 - u_ * s_n) / h_

        m_left, m_right = moment_pair(v_hi)
        self.full_left[sl] = p_lo * drop_full * m_left
        self.full_right[sl] = p_hi * m_right

        t_early = x[sl]  # (early, 2) outer Gauss points
        mt_left, mt_right = moment_pair(t_early)
        self.part_left[sl] = (
            p_lo[:, None] * np.exp(exp_nodes[:-1][sl][:, None] - exp_x[sl]) * mt_left
        )
        self.part_right[sl] = (
            p_hi[:, None] * np.exp(exp_nodes[1:][sl][:, None] - exp_x[sl]) * mt_right
        )

        self.decay_log = exp_nodes[:-1, None] - exp_x  # (M, 2), <= 0 up to roundoff
        log_c = math.log(c_norm)
        with np.errstate(divide="ignore"):
            self.node_prefactor = (k - dim) * np.log(rp) - log_c
            self.point_prefactor = (k - dim) * np.log(x) - log_c
        self.outer_weight = 0.5 * h
        self.points = x

    def apply(self, load: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Slope samples and their running integral for nodal loads.

        Returns ``(slope, cumulative)``, both over the full grid, with
        ``slope[0] = cumulative[0] = 0``.
        """
        w = np.asarray(load, dtype=float)
        if w.shape != self.grid.nodes.shape:
            raise ValueError(
                f"load shape {w.shape} does not match grid {self.grid.nodes.shape}"
            )
        if not np.isfinite(w).all():
            raise ValueError("load samples must be finite")
        if (w < 0).any():
            raise ValueError("load samples must be nonnegative")
        k = self.order
        w_left, w_right = w[:-1], w[1:]

        # overflow inside this block surfaces as non-finite output and is
        # raised below; zero loads go through log as -inf harmlessly
        with np.errstate(divide="ignore", over="ignore"):
            full = self.full_left * w_left + self.full_right * w_right
            terms = np.log(full) + self.exp_nodes[1:]
            running = np.logaddexp.accumulate(terms)
            log_load_nodes = running - self.exp_nodes[1:]

            slope = np.exp((log_load_nodes + self.node_prefactor) / k)
            slope = np.concatenate(([0.0], slope))

            partial = (
                self.part_left * w_left[:, None] + self.part_right * w_right[:, None]
            )
            log_prev = np.concatenate(([-np.inf], log_load_nodes[:-1]))
            log_at_points = np.logaddexp(
                log_prev[:, None] + self.decay_log, np.log(partial)
            )
            slope_points = np.exp((log_at_points + self.point_prefactor) / k)
            increments = self.outer_weight * slope_points.sum(axis=1)
            cumulative = np.concatenate(([0.0], np.cumsum(increments)))

        bad = ~np.isfinite(slope)
        if bad.any() or not np.isfinite(cumulative[-1]):
            idx = int(np.argmax(bad)) if bad.any() else len(slope) - 1
            raise KernelOverflowError(
                f"slope kernel overflow at r={self.grid.nodes[idx]!r}",
                radius=float(self.grid.nodes[idx]),
                exponent=float(self.exp_nodes[min(idx, len(self.exp_nodes) - 1)]),
            )
        return slope, cumulative


def slope_kernel(
    problem: ValidatedProblem,
    index: int,
    r: float,
    load,
    tol: float = 1e-10,
) -> float:
    """Single slope value at radius ``r`` for a callable load.

    Reference scalar path via nested adaptive quadrature; the exponent
    enters only through the difference ``E(t) - E(r) = -integral_t^r``.
    """
    comp = problem.component(index)
    beta = _exponent_integrand(comp)
    r = float(r)
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if r == 0.0:
        return 0.0
    k, dim, c_norm = comp.order, problem.dim, comp.norm_const
    source = comp.source

    def inner(t: float) -> float:
        drop, _ = adaptive_integral(beta, t, r, max(tol * 0.1, 1e-13))
        # drop >= 0, so the damping factor only ever underflows
        return t ** (dim - 1) * float(source(t)) * float(load(t)) * math.exp(-drop)

    value, _ = adaptive_integral(inner, 0.0, r, tol)
    if value <= 0.0:
        return 0.0
    log_phi = (math.log(value) + (k - dim) * math.log(r) - math.log(c_norm)) / k
    if log_phi > 700.0:
        raise KernelOverflowError(
            f"slope kernel overflow at r={r!r}", radius=r, exponent=math.nan
        )
    return math.exp(log_phi)


def growth_budget_table(
    problem: ValidatedProblem,
    index: int,
    grid: RadialGrid,
    operator: SlopeOperator | None = None,
) -> GridFunction:
    """Running integral of the unit-load slope at the grid nodes."""
    op = operator or SlopeOperator(problem, index, grid)
    slope, _ = op.apply(np.ones(grid.size))
    return cumulative_integral(GridFunction(grid, slope))


# --------------------------------------------------------------------------
# Keller-Osserman growth-rate integral


def _ko_integrand_factory(problem: ValidatedProblem):
    def rate(t):
        t = np.asarray(t, dtype=float)
        denom = problem.ko_denominator(t)
        small = denom <= 0.0
        if np.any(small):
            where = float(np.atleast_1d(t)[np.argmax(np.atleast_1d(small))])
            raise HypothesisViolationError(
                f"growth-rate denominator is not positive at t={where!r}"
            )
        return 1.0 / denom

    return rate


def _segment_integrals(rate, lo: np.ndarray, hi: np.ndarray):
    """Fixed-order Gauss values and error estimates on many segments."""

    def rule(nodes, weights):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        pts = mid[:, None] + half[:, None] * nodes[None, :]
        vals = rate(pts.ravel()).reshape(pts.shape)
        return half * (vals * weights[None, :]).sum(axis=1)

    main = rule(*_KO_RULE_MAIN)
    check = rule(*_KO_RULE_CHECK)
    return main, np.abs(main - check)


def keller_osserman_table(
    problem: ValidatedProblem,
    s_max: float,
    points: int = 257,
) -> tuple[np.ndarray, np.ndarray]:
    """Growth-rate integral from the center sum, on geometric node spacing.

    Returns ``(nodes, values)`` with ``nodes[0]`` at the center sum,
    ``values[0] = 0`` and strictly increasing values.
    """
    a = problem.center_sum
    s_max = float(s_max)
    if not (s_max > a):
        raise ValueError(f"s_max must exceed the center sum {a!r}")
    if points < 8:
        raise ValueError("table needs at least 8 points")
    if not problem.ko_denominator_positive:
        raise HypothesisViolationError(
            "growth-rate denominator vanished during validation; "
            "growth tables are undefined for this problem"
        )
    span = s_max - a
    offsets = np.concatenate(([0.0], np.geomspace(span * 1e-6, span, points - 1)))
    nodes = a + offsets
    rate = _ko_integrand_factory(problem)
    seg, seg_err = _segment_integrals(rate, nodes[:-1], nodes[1:])
    # split whichever segments exceed their error share until the summed
    # estimate meets tolerance; bisection concentrates nodes wherever the
    # integrand is steep, so wide spans stay cheap
    for _ in range(48):
        total = float(np.cumsum(seg)[-1]) if seg.size else 0.0
        tol = 1e-8 * max(1.0, total)
        if seg_err.sum() <= tol or nodes.size > 100_000:
            break
        bad = seg_err > tol / (2.0 * seg.size)
        if not bad.any():
            bad = seg_err == seg_err.max()
        mids = 0.5 * (nodes[:-1][bad] + nodes[1:][bad])
        nodes = np.sort(np.concatenate((nodes, mids)))
        seg, seg_err = _segment_integrals(rate, nodes[:-1], nodes[1:])
    else:
        raise NumericalFailureError(
            "growth-rate table quadrature did not reach tolerance"
        )
    if seg_err.sum() > 1e-8 * max(1.0, float(np.sum(seg))):
        raise NumericalFailureError(
            "growth-rate table quadrature did not reach tolerance"
        )
    if not (seg > 0.0).all():
        raise NumericalFailureError("growth-rate table failed to increase strictly")
    values = np.concatenate(([0.0], np.cumsum(seg)))
    return nodes, values


def keller_osserman_value(
    problem: ValidatedProblem,
    nodes: np.ndarray,
    values: np.ndarray,
    points,
) -> np.ndarray:
    """Evaluate the growth-rate integral at arbitrary points in the table span.

    Uses the table value at the nearest node below plus one Gauss segment
    for the remainder, the same construction the inverse bisection uses,
    so forward and inverse evaluations agree to the bisection tolerance.
    """
    s = np.atleast_1d(np.asarray(points, dtype=float))
    if (s < nodes[0] - 1e-12).any() or (s > nodes[-1] * (1.0 + 1e-12)).any():
        raise ValueError("evaluation points must lie within the table span")
    cells = np.clip(np.searchsorted(nodes, s, side="right"), 1, len(nodes) - 1)
    base = nodes[cells - 1]
    rate = _ko_integrand_factory(problem)
    partial, _ = _segment_integrals(rate, base, np.maximum(s, base))
    return values[cells - 1] + partial


def keller_osserman_inverse_many(
    problem: ValidatedProblem,
    nodes: np.ndarray,
    values: np.ndarray,
    targets,
    rel_tol: float = 1e-10,
) -> np.ndarray:
    """Invert the growth-rate integral at many targets at once.

    Brackets each target in the monotone table, then bisects all brackets
    in lockstep; each bisection step evaluates one vectorized Gauss rule
    for the partial integrals from the bracket base to the midpoints.
    """
    ys = np.atleast_1d(np.asarray(targets, dtype=float))
    if (ys < 0).any() or not np.isfinite(ys).all():
        raise ValueError("inverse targets must be finite and nonnegative")
    over = ys > values[-1] * (1.0 + 1e-12)
    if over.any():
        worst = float(ys.max())
        slope_end = (nodes[-1] - nodes[-2]) / max(values[-1] - values[-2], 1e-300)
        suggestion = float(nodes[-1] + (worst - values[-1]) * slope_end * 4.0)
        raise TableRangeError(
            f"target {worst!r} exceeds the table range {values[-1]!r}; "
            "rebuild with a larger s_max",
            suggested_s_max=suggestion,
        )
    rate = _ko_integrand_factory(problem)
    cells = np.clip(np.searchsorted(values, ys, side="left"), 1, len(values) - 1)
    base = nodes[cells - 1]
    base_val = values[cells - 1]
    lo = base.copy()
    hi = nodes[cells].copy()
    # residual target inside each cell
    resid = ys - base_val
    exact = ys <= 0.0
    lo[exact] = nodes[0]
    hi[exact] = nodes[0]
    for _ in range(64):
        width = hi - lo
        scale = np.maximum(1.0, np.abs(hi))
        active = width > rel_tol * scale
        if not active.any():
            break
        mid = np.where(active, 0.5 * (lo + hi), lo)
        partial, _ = _segment_integrals(rate, base[active], mid[active])
        go_right = np.zeros(ys.shape, dtype=bool)
        go_right[active] = partial < resid[active]
        lo = np.where(active & go_right, mid, lo)
        hi = np.where(active & ~go_right, mid, hi)
    return 0.5 * (lo + hi)


def keller_osserman_inverse(
    problem: ValidatedProblem,
    nodes: np.ndarray,
    values: np.ndarray,
    target: float,
    rel_tol: float = 1e-10,
) -> float:
    """Scalar convenience wrapper around the vectorized inverse."""
    return float(
        keller_osserman_inverse_many(problem, nodes, values, [target], rel_tol)[0]
    )


# --------------------------------------------------------------------------
# Limit facts at infinity


class _SlopeTailEvaluator:
    """Unit-load slope on an extended grid reaching the window cap.

    The grid is uniform on the core ``[0, core]`` and geometric beyond,
    with every doubling edge ``core * 2^j`` landing exactly on a node, so
    window integrals come straight off the operator's running integral.
    """

    def __init__(
        self,
        problem: ValidatedProblem,
        index: int,
        r_cap: float,
        core: float = 1.0,
        core_nodes: int = 257,
        octave_steps: int = 15,
    ):
        self.core = core = float(core)
        n_octaves = max(1, math.ceil(math.log2(max(r_cap, 2.0 * core) / core)))
        pieces = [np.linspace(0.0, core, core_nodes)]
        edge_indices = [core_nodes - 1]
        lo = core
        step = 2.0 ** (1.0 / octave_steps)
        for _ in range(n_octaves):
            local = lo * step ** np.arange(1, octave_steps + 1)
            local[-1] = lo * 2.0
            pieces.append(local)
            edge_indices.append(edge_indices[-1] + octave_steps)
            lo = lo * 2.0
        nodes = np.concatenate(pieces)
        self.grid = RadialGrid(nodes)
        self.edge_indices = np.array(edge_indices)
        self.overflowed = False
        op = SlopeOperator(problem, index, self.grid)
        try:
            self.slope, self.cumulative = op.apply(np.ones(self.grid.size))
        except KernelOverflowError:
            self.overflowed = True
            self.slope = None
            self.cumulative = None

    def windows(self) -> np.ndarray:
        return np.diff(self.cumulative[self.edge_indices])

    def window_errors(self) -> np.ndarray:
        """Conservative per-window quadrature bound from a trapezoid shadow."""
        trap = np.concatenate(
            (
                [0.0],
                np.cumsum(0.5 * np.diff(self.grid.nodes) * (self.slope[:-1] + self.slope[1:])),
            )
        )
        return np.abs(np.diff((self.cumulative - trap)[self.edge_indices]))

    def prefix(self) -> tuple[float, float]:
        trap_core = np.trapezoid(
            self.slope[: self.edge_indices[0] + 1],
            self.grid.nodes[: self.edge_indices[0] + 1],
        )
        value = float(self.cumulative[self.edge_indices[0]])
        return value, abs(value - float(trap_core))


@dataclass(frozen=True)
class TailLimits:
    """Limit facts at infinity for the growth budgets and the growth rate."""

    budget1: LimitEstimate
    budget2: LimitEstimate
    ko: LimitEstimate


def _budget_limit(
    problem: ValidatedProblem, index: int, policy: LimitPolicy
) -> LimitEstimate:
    evaluator = _SlopeTailEvaluator(problem, index, policy.r_max)
    if evaluator.overflowed:
        return LimitEstimate(verdict="divergent", evidence=math.inf, windows_used=0)
    prefix, prefix_err = evaluator.prefix()
    return limit_from_windows(
        evaluator.windows(), evaluator.window_errors(), policy, prefix, prefix_err
    )


def tail_limits(
    problem: ValidatedProblem, policy: LimitPolicy | None = None
) -> TailLimits:
    """Limit facts for both growth budgets and the growth-rate integral.

    Budget windows double from radius 1 with the ``[0, 1]`` running
    integral as prefix; the growth-rate windows double from the center
    sum.  A slope overflow during budget evaluation is itself divergence
    evidence, since these integrands vary on the scale of the radius.
    """
    policy = policy or LimitPolicy()
    if not problem.ko_denominator_positive:
        raise HypothesisViolationError(
            "growth-rate denominator vanished during validation; "
            "limit facts are undefined for this problem"
        )
    rate = _ko_integrand_factory(problem)
    ko = estimate_limit(rate, problem.center_sum, policy)
    return TailLimits(
        budget1=_budget_limit(problem, 1, policy),
        budget2=_budget_limit(problem, 2, policy),
        ko=ko,
    )


# --------------------------------------------------------------------------
# Bundled tables


@dataclass(frozen=True, eq=False)
class KernelTables:
    """Every table a classification or verification run needs, built once."""

    grid: RadialGrid
    exponent1: GridFunction
    exponent2: GridFunction
    slope1: GridFunction
    slope2: GridFunction
    budget1: GridFunction
    budget2: GridFunction
    ko_nodes: np.ndarray | None
    ko_values: np.ndarray | None
    limits: TailLimits | None

    def require_ko(self) -> tuple[np.ndarray, np.ndarray]:
        if self.ko_nodes is None:
            raise NumericalFailureError("tables were built without the growth-rate part")
        return self.ko_nodes, self.ko_values


def build_tables(
    problem: ValidatedProblem,
    grid: RadialGrid,
    *,
    s_max: float | None = None,
    policy: LimitPolicy | None = None,
    with_limits: bool = True,
    with_ko: bool = True,
    ko_points: int = 257,
) -> KernelTables:
    """Build exponent, slope, budget and growth-rate tables for one grid.

    With ``s_max=None`` the growth-rate table is extended by doubling until
    it covers the largest budget sum on the grid, stopping early if the
    integral plateaus (then later inversions report the range honestly).
    """
    op1 = SlopeOperator(problem, 1, grid)
    op2 = SlopeOperator(problem, 2, grid)
    slope1, _ = op1.apply(np.ones(grid.size))
    slope2, _ = op2.apply(np.ones(grid.size))
    slope1 = GridFunction(grid, slope1)
    slope2 = GridFunction(grid, slope2)
    budget1 = cumulative_integral(slope1)
    budget2 = cumulative_integral(slope2)

    ko_nodes = ko_values = None
    if with_ko:
        a = problem.center_sum
        if s_max is not None:
            ko_nodes, ko_values = keller_osserman_table(problem, s_max, ko_points)
        else:
            need = 1.02 * float(budget1.values[-1] + budget2.values[-1]) + 1e-12
            s = a + max(1.0, a, grid.radius)
            ko_nodes, ko_values = keller_osserman_table(problem, s, ko_points)
            for _ in range(60):
                if ko_values[-1] >= need:
                    break
                s = a + 2.0 * (s - a)
                prev_top = ko_values[-1]
                ko_nodes, ko_values = keller_osserman_table(problem, s, ko_points)
                if ko_values[-1] - prev_top < 1e-14 * max(1.0, prev_top):
                    break  # plateau: the growth-rate integral is bounded

    limits = tail_limits(problem, policy) if with_limits else None
    return KernelTables(
        grid=grid,
        exponent1=convection_exponent_table(problem, 1, grid),
        exponent2=convection_exponent_table(problem, 2, grid),
        slope1=slope1,
        slope2=slope2,
        budget1=budget1,
        budget2=budget2,
        ko_nodes=ko_nodes,
        ko_values=ko_values,
        limits=limits,
    )
