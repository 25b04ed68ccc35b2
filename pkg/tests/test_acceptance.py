"""Acceptance suite.

Each test covers one numbered criterion and prints a single
``[PASS]``/``[FAIL]`` line (visible with ``pytest -s`` or on failure).
Tolerances are pinned in the assertions, not configurable.
"""

import math
from types import SimpleNamespace

import numpy as np
import pytest

from conftest import (
    convection_unit,
    laplacian_unit,
    make_problem,
    monge_ampere_unit,
    quadratic_sum_pair,
)
from khess import (
    ProblemSpec,
    RadialGrid,
    build_tables,
    classify,
    convexity_report,
    envelope,
    hessian_forms_consistency,
    keller_osserman_inverse,
    keller_osserman_table,
    keller_osserman_value,
    keller_osserman_inverse_many,
    parse_func_1d,
    parse_func_2d,
    residual_maxima,
    solve_successive,
    validate_problem,
)


def _report(number, label, ok, detail=""):
    marker = "PASS" if ok else "FAIL"
    print(f"[{marker}] criterion {number}: {label}")
    assert ok, f"criterion {number}: {label}" + (f" ({detail})" if detail else "")


def _random_instances(count=20, seed=20260823):
    """Randomized desk-scale instances from the increasing presets.

    The first six use constant nonlinearities so the lower-bound
    equality case is exercised; the rest alternate between sum-power
    and product-power forms, all nondecreasing with nonnegative
    drift and source weights.
    """
    rng = np.random.default_rng(seed)
    fleet = []
    for index in range(count):
        dim = int(rng.integers(3, 6))
        k1 = int(rng.integers(1, dim + 1))
        k2 = int(rng.integers(1, dim + 1))
        a1 = round(float(rng.uniform(0.3, 1.5)), 3)
        a2 = round(float(rng.uniform(0.3, 1.5)), 3)

        def two_d():
            if index < 6:
                return f"{float(rng.uniform(0.4, 1.6)):.3f}"
            if index % 2 == 0:
                c, g = rng.uniform(0.2, 1.2), rng.uniform(0.3, 1.0)
                return f"{c:.3f} * (u + v)^{g:.3f}"
            alpha = float(rng.uniform(0.15, 0.55))
            beta = float(rng.uniform(0.1, 0.95 - alpha))
            return f"{float(rng.uniform(0.3, 1.2)):.3f} * u^{alpha:.3f} * v^{beta:.3f}"

        def weight():
            c = float(rng.uniform(0.3, 1.4))
            return f"{c:.3f}" if rng.random() < 0.5 else f"{c:.3f} / (1 + t)^4"

        def drift():
            return "0" if rng.random() < 0.5 else f"{float(rng.uniform(0.05, 0.4)):.3f}"

        spec = ProblemSpec(
            dim=dim,
            k1=k1,
            k2=k2,
            a1=a1,
            a2=a2,
            b1=parse_func_1d(drift()),
            b2=parse_func_1d(drift()),
            p1=parse_func_1d(weight()),
            p2=parse_func_1d(weight()),
            f1=parse_func_2d(two_d()),
            f2=parse_func_2d(two_d()),
        )
        problem = validate_problem(spec)
        grid = RadialGrid.uniform(round(float(rng.uniform(0.8, 1.6)), 3), 161)
        solution, trace = solve_successive(problem, grid, keep_iterates=True)
        tables = build_tables(problem, grid, with_limits=False)
        fleet.append(
            SimpleNamespace(
                problem=problem,
                grid=grid,
                solution=solution,
                trace=trace,
                tables=tables,
                env=envelope(problem, tables),
                constant_f=index < 6,
            )
        )
    return fleet


@pytest.fixture(scope="module")
def fleet():
    return _random_instances()


def test_criterion_01_laplacian_closed_form():
    grid = RadialGrid.uniform(3.0, 601)
    sol, trace = solve_successive(laplacian_unit(), grid)
    want = 1.0 + grid.nodes**2 / 6.0
    err = float(np.abs(sol.u1.values - want).max())
    end_err = abs(sol.u1.values[-1] - 2.5)
    ok = trace.converged and err < 1e-6 and end_err < 1e-6
    _report(1, f"unit-source order-1 profile matches 1 + r^2/6 (max err {err:.3g})", ok)


def test_criterion_02_full_order_closed_form():
    p = monge_ampere_unit()
    grid = RadialGrid.uniform(3.0, 601)
    sol, _ = solve_successive(p, grid)
    want = 1.0 + grid.nodes**2 / 2.0
    err = float(np.abs(sol.u1.values - want).max())
    gap = hessian_forms_consistency(grid, sol.u1, sol.du1, p.k1, p.dim)
    ok = err < 1e-6 and gap < 1e-4
    _report(
        2,
        f"full-order profile matches 1 + r^2/2 (err {err:.3g}), forms agree ({gap:.3g})",
        ok,
    )


def test_criterion_03_convection_slope_value():
    grid = RadialGrid.uniform(2.0, 801)
    sol, _ = solve_successive(convection_unit(), grid)
    got = float(sol.du1(np.array([1.0]))[0])
    want = 1.0 - 2.0 / math.e
    err = abs(got - want)
    ok = err < 1e-6
    _report(3, f"unit-drift slope at r=1 is 1 - 2/e (err {err:.3g})", ok)


def test_criterion_04_iterates_nondecreasing(fleet):
    worst = 0.0
    for inst in fleet:
        steps = inst.trace.iterates
        for prev, nxt in zip(steps, steps[1:]):
            worst = min(
                worst,
                float((nxt[0] - prev[0]).min()),
                float((nxt[1] - prev[1]).min()),
            )
    ok = worst >= -1e-12
    _report(
        4,
        f"iterates nondecreasing nodewise on 20 random instances (worst step {worst:.3g})",
        ok,
    )


def test_criterion_05_iterates_below_inverted_budget_sum(fleet):
    worst = -math.inf
    for inst in fleet:
        cap = inst.env.upper_sum.values
        for w1, w2 in inst.trace.iterates:
            worst = max(worst, float((w1 + w2 - cap).max()))
    ok = worst <= 1e-6
    _report(
        5,
        f"every iterate sum stays under the inverted budget sum (worst excess {worst:.3g})",
        ok,
    )


def test_criterion_06_lower_bound_and_equality(fleet):
    worst_violation = -math.inf
    worst_equality = 0.0
    saw_constant = False
    for inst in fleet:
        low1 = inst.env.lower1.values
        low2 = inst.env.lower2.values
        worst_violation = max(
            worst_violation,
            float((low1 - inst.solution.u1.values).max()),
            float((low2 - inst.solution.u2.values).max()),
        )
        if inst.constant_f:
            saw_constant = True
            worst_equality = max(
                worst_equality,
                float(np.abs(inst.solution.u1.values - low1).max()),
            )
    ok = saw_constant and worst_violation <= 1e-6 and worst_equality < 1e-6
    _report(
        6,
        "solutions dominate the center-pair lower bound "
        f"(worst {worst_violation:.3g}); equality for constant nonlinearity "
        f"({worst_equality:.3g})",
        ok,
    )


def test_criterion_07_quadratic_instance_limits_and_bound():
    literal = quadratic_sum_pair()
    rep = classify(literal)
    all_finite = (
        rep.ko_limit.verdict
        == rep.budget1_limit.verdict
        == rep.budget2_limit.verdict
        == "finite"
    )
    rate_err = abs(rep.ko_limit.value - 0.0625)
    checks = [all_finite, rate_err < 1e-6, rep.theorem2_margin is not None]

    # the margin decides the conditional branch; here it is negative
    # (budget sum 1/3 exceeds the rate limit 1/16), so exercise the
    # positive branch on the same family with the weights scaled down
    if rep.theorem2_margin is not None and rep.theorem2_margin > 0:
        checks.append(rep.verdict == "Theorem2_bounded_with_envelope")
    scaled = quadratic_sum_pair(c_weight=0.05)
    rep2 = classify(scaled)
    checks.append(rep2.theorem2_margin is not None and rep2.theorem2_margin > 0)
    checks.append(rep2.verdict == "Theorem2_bounded_with_envelope")

    grid = RadialGrid.uniform(50.0, 1001)
    sol, _ = solve_successive(scaled, grid)
    nodes, values = keller_osserman_table(scaled, 50.0, 513)
    cap = keller_osserman_inverse(
        scaled, nodes, values, rep2.budget1_limit.value + rep2.budget2_limit.value
    )
    peak = float((sol.u1.values + sol.u2.values).max())
    checks.append(peak <= cap + 1e-6)
    ok = all(checks)
    _report(
        7,
        f"quadratic instance: finite limits, rate limit 0.0625 (err {rate_err:.3g}); "
        f"scaled margin {rep2.theorem2_margin:.4f} > 0 gives bounded verdict and "
        f"sum peak {peak:.4f} <= {cap:.4f} through r=50",
        ok,
    )


def test_criterion_08_constant_data_grows_without_bound():
    problem = make_problem()
    rep = classify(problem)
    target = 10.0 * (problem.a1 + problem.a2)
    radius, reached = 4.0, None
    while radius <= 512.0:
        grid = RadialGrid.uniform(radius, 401)
        sol, _ = solve_successive(problem, grid)
        if sol.u1.values[-1] > target:
            reached = radius
            break
        radius *= 2.0
    ok = rep.verdict == "Theorem1_Case2_large" and reached is not None
    _report(
        8,
        f"constant data: verdict {rep.verdict}, profile passes 10x center sum "
        f"by R={reached}",
        ok,
    )


def test_criterion_09_convexity_criteria_and_profiles():
    cases = [
        make_problem(),
        make_problem(
            dim=4,
            k1=2,
            k2=1,
            a1=0.7,
            a2=0.9,
            p1=parse_func_1d("1 + t^2"),
            p2=parse_func_1d("1 + t"),
            f1=parse_func_2d("(u + v)^0.5"),
            f2=parse_func_2d("0.8"),
        ),
        make_problem(dim=5, k1=5, k2=3, p1=parse_func_1d("2"), f2=parse_func_2d("1.5")),
    ]
    ok = True
    worst_dd = math.inf
    for problem in cases:
        grid = RadialGrid.uniform(2.0, 401)
        sol, _ = solve_successive(problem, grid)
        rep = convexity_report(problem, sol)
        ok = ok and rep.criterion1 and rep.criterion2 and rep.convex1 and rep.convex2
        for du in (sol.du1.values, sol.du2.values):
            dd = np.gradient(du, grid.nodes, edge_order=2)
            worst_dd = min(worst_dd, float(dd.min()))
    ok = ok and worst_dd >= -1e-8
    _report(
        9,
        "drift-free increasing-source instances: criteria hold and profiles "
        f"stay convex (min second derivative {worst_dd:.3g})",
        ok,
    )


def test_criterion_10_residual_small_and_shrinking():
    ok = True
    details = []
    for problem in (laplacian_unit(), monge_ampere_unit()):
        res = {}
        for count in (601, 1201):
            grid = RadialGrid.uniform(3.0, count)
            sol, _ = solve_successive(problem, grid)
            max1, max2, _, _ = residual_maxima(problem, sol)
            res[count] = max(max1, max2)
        ok = ok and res[601] < 1e-4 and res[1201] <= max(res[601], 1e-10)
        details.append(f"{res[601]:.3g} -> {res[1201]:.3g}")
    _report(10, f"interior residuals small and non-growing ({', '.join(details)})", ok)


def test_criterion_11_growth_rate_round_trip(fleet):
    rng = np.random.default_rng(7)
    worst = 0.0
    for inst in fleet + [SimpleNamespace(problem=quadratic_sum_pair(), tables=None)]:
        problem = inst.problem
        if inst.tables is None:
            nodes, values = keller_osserman_table(problem, 40.0, 513)
        else:
            nodes, values = inst.tables.require_ko()
        span = nodes[-1] - nodes[0]
        s = rng.uniform(nodes[0] + 1e-3 * span, nodes[-1], size=100)
        y = keller_osserman_value(problem, nodes, values, s)
        back = keller_osserman_inverse_many(problem, nodes, values, y)
        worst = max(worst, float(np.abs(back - s).max() / s.min()))
    ok = worst < 1e-8
    _report(
        11,
        f"growth-rate integral inverts its own values (worst rel err {worst:.3g})",
        ok,
    )
