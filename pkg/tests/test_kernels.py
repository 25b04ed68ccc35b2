import math

import numpy as np
import pytest

from conftest import (
    convection_unit,
    decay_weight_pair,
    laplacian_unit,
    make_problem,
    quadratic_sum_pair,
)
from khess import (
    FuncSpec1D,
    FuncSpec2D,
    HypothesisViolationError,
    KernelOverflowError,
    RadialGrid,
    SlopeOperator,
    TableRangeError,
    adaptive_integral,
    build_tables,
    convection_exponent_table,
    growth_budget_table,
    keller_osserman_inverse,
    keller_osserman_inverse_many,
    keller_osserman_table,
    keller_osserman_value,
    slope_kernel,
    tail_limits,
)


GRID = RadialGrid.uniform(3.0, 601)


class TestConvectionExponent:
    def test_zero_drift_zero_exponent(self):
        table = convection_exponent_table(laplacian_unit(), 1, GRID)
        assert np.abs(table.values).max() == 0.0

    def test_unit_drift_linear_exponent(self):
        # k=1 and C=1 make the integrand equal the drift itself
        table = convection_exponent_table(convection_unit(), 1, GRID)
        assert np.abs(table.values - GRID.nodes).max() < 1e-12

    def test_linear_drift_quadratic_exponent(self):
        p = make_problem(b1=FuncSpec1D.power(1.0, 1.0))
        table = convection_exponent_table(p, 1, GRID)
        assert np.abs(table.values - GRID.nodes**2 / 2.0).max() < 1e-12

    def test_higher_order_weighting(self):
        # k=2 in dimension 5: integrand t * b / C with C = 2
        p = make_problem(dim=5, k1=2, k2=2, b1=FuncSpec1D.constant(1.0))
        table = convection_exponent_table(p, 1, GRID)
        assert np.abs(table.values - GRID.nodes**2 / 4.0).max() < 1e-11


class TestSlopeOperatorClosedForms:
    def test_laplacian_unit_load(self):
        op = SlopeOperator(laplacian_unit(), 1, GRID)
        slope, cml = op.apply(np.ones(GRID.size))
        assert np.abs(slope - GRID.nodes / 3.0).max() < 1e-12
        assert np.abs(cml - GRID.nodes**2 / 6.0).max() < 1e-12

    def test_full_order_component(self):
        # k = N makes the slope exactly r for unit data, any dimension
        for dim in (3, 5):
            p = make_problem(dim=dim, k1=dim, k2=1)
            op = SlopeOperator(p, 1, GRID)
            slope, cml = op.apply(np.ones(GRID.size))
            assert np.abs(slope - GRID.nodes).max() < 2e-8
            assert np.abs(cml - GRID.nodes**2 / 2.0).max() < 1e-9

    def test_intermediate_order(self):
        # N=5, k=2: slope r / sqrt(10)
        p = make_problem(dim=5, k1=2, k2=1)
        op = SlopeOperator(p, 1, GRID)
        slope, _ = op.apply(np.ones(GRID.size))
        assert np.abs(slope - GRID.nodes / math.sqrt(10.0)).max() < 5e-8

    def test_slope_vanishes_at_origin(self):
        op = SlopeOperator(laplacian_unit(), 1, GRID)
        slope, cml = op.apply(np.linspace(1.0, 4.0, GRID.size))
        assert slope[0] == 0.0
        assert cml[0] == 0.0

    def test_monotone_in_the_load(self):
        # nonnegative coefficients: a larger load can only raise the slope
        op = SlopeOperator(laplacian_unit(), 1, GRID)
        lo, _ = op.apply(np.ones(GRID.size))
        hi, _ = op.apply(np.ones(GRID.size) + np.linspace(0.0, 1.0, GRID.size))
        assert (hi >= lo - 1e-15).all()

    def test_rejects_bad_loads(self):
        op = SlopeOperator(laplacian_unit(), 1, GRID)
        with pytest.raises(ValueError):
            op.apply(np.ones(5))
        with pytest.raises(ValueError):
            op.apply(np.full(GRID.size, -1.0))
        with pytest.raises(ValueError):
            op.apply(np.full(GRID.size, np.nan))

    def test_overflowing_slope_raises(self):
        p = make_problem(p1=FuncSpec1D.constant(1e8))
        op = SlopeOperator(p, 1, GRID)
        with pytest.raises(KernelOverflowError):
            op.apply(np.full(GRID.size, 1e301))


class TestSlopeDualRoutes:
    def test_scalar_kernel_matches_operator_without_drift(self):
        p = make_problem(dim=5, k1=2, k2=1)
        op = SlopeOperator(p, 1, GRID)
        slope, _ = op.apply(np.ones(GRID.size))
        for idx in (40, 200, 600):
            r = GRID.nodes[idx]
            ref = slope_kernel(p, 1, r, lambda t: 1.0)
            assert slope[idx] == pytest.approx(ref, rel=1e-8, abs=1e-10)

    def test_scalar_kernel_matches_operator_with_drift(self):
        p = convection_unit()
        op = SlopeOperator(p, 1, GRID)
        slope, _ = op.apply(np.ones(GRID.size))
        for idx in (100, 300, 550):
            r = GRID.nodes[idx]
            ref = slope_kernel(p, 1, r, lambda t: 1.0)
            assert slope[idx] == pytest.approx(ref, rel=1e-8)

    def test_variable_load(self):
        # the operator sees the load through linear interpolation between
        # nodes, so the scalar reference must look through the same lens
        p = laplacian_unit()
        op = SlopeOperator(p, 1, GRID)
        load = 1.0 + GRID.nodes**2
        slope, _ = op.apply(load)
        idx = 400  # r = 2.0

        smooth = slope_kernel(p, 1, 2.0, lambda t: 1.0 + t * t)
        assert slope[idx] == pytest.approx(smooth, rel=1e-5)
        # and the interpolation gap shrinks like h^2 under refinement
        fine = RadialGrid.uniform(3.0, 2401)
        op_fine = SlopeOperator(p, 1, fine)
        slope_fine, _ = op_fine.apply(1.0 + fine.nodes**2)
        gap_coarse = abs(slope[idx] - smooth)
        gap_fine = abs(slope_fine[1600] - smooth)
        assert gap_fine < gap_coarse / 8.0

    def test_materialized_exponential_route(self):
        # for a mild drift the exponential can be materialized directly:
        # slope^k * C * r^(N-k) = integral of t^(N-1) e^(E(t)) p w / e^(E(r))
        p = make_problem(a1=0.0, a2=1.0, b1=FuncSpec1D.constant(0.25))
        op = SlopeOperator(p, 1, GRID)
        slope, _ = op.apply(np.ones(GRID.size))

        def forward(t):
            return t**2 * math.exp(0.25 * t)

        for idx in (150, 450):
            r = GRID.nodes[idx]
            raw, _ = adaptive_integral(forward, 0.0, r, 1e-12)
            expected = raw * math.exp(-0.25 * r) / r**2
            assert slope[idx] == pytest.approx(expected, rel=1e-9)


class TestGrowthBudget:
    def test_unit_data_budget_is_parabola(self):
        table = growth_budget_table(laplacian_unit(), 1, GRID)
        assert np.abs(table.values - GRID.nodes**2 / 6.0).max() < 1e-12

    def test_decay_weight_budget_against_adaptive(self):
        p = decay_weight_pair()
        table = growth_budget_table(p, 1, GRID)

        def phi(r):
            return slope_kernel(p, 1, r, lambda t: 1.0)

        ref, _ = adaptive_integral(phi, 0.0, 3.0, 1e-10)
        assert table.values[-1] == pytest.approx(ref, rel=1e-7)


class TestKellerOssermanTable:
    def test_quadratic_sum_closed_form(self):
        # denominator 8 t^2 integrates to 1/16 - 1/(8 s) from 2
        p = quadratic_sum_pair()
        nodes, values = keller_osserman_table(p, 64.0)
        exact = 1.0 / 16.0 - 1.0 / (8.0 * nodes)
        assert np.abs(values - exact).max() < 1e-10

    def test_value_at_interior_point(self):
        p = quadratic_sum_pair()
        nodes, values = keller_osserman_table(p, 64.0)
        got = keller_osserman_value(p, nodes, values, 4.0)
        assert float(got[0]) == pytest.approx(1.0 / 32.0, abs=1e-10)

    def test_forward_inverse_round_trip(self):
        p = quadratic_sum_pair()
        nodes, values = keller_osserman_table(p, 64.0)
        rng = np.random.default_rng(7)
        ss = rng.uniform(2.05, 60.0, size=100)
        ys = keller_osserman_value(p, nodes, values, ss)
        back = keller_osserman_inverse_many(p, nodes, values, ys)
        assert np.abs(back / ss - 1.0).max() < 1e-8

    def test_inverse_at_zero_is_center_sum(self):
        p = quadratic_sum_pair()
        nodes, values = keller_osserman_table(p, 64.0)
        assert keller_osserman_inverse(p, nodes, values, 0.0) == pytest.approx(2.0)

    def test_target_out_of_range(self):
        p = quadratic_sum_pair()
        nodes, values = keller_osserman_table(p, 8.0)
        with pytest.raises(TableRangeError) as exc:
            keller_osserman_inverse(p, nodes, values, values[-1] * 2.0)
        assert exc.value.suggested_s_max is not None
        assert exc.value.suggested_s_max > 8.0

    def test_constant_nonlinearity_linear_growth(self):
        p = laplacian_unit()
        nodes, values = keller_osserman_table(p, 10.0)
        # denominator is the constant 2
        assert np.abs(values - (nodes - 2.0) / 2.0).max() < 1e-10

    def test_degenerate_pair_refused(self):
        p = make_problem(f1=FuncSpec2D.constant(0.0), f2=FuncSpec2D.constant(0.0))
        with pytest.raises(HypothesisViolationError):
            keller_osserman_table(p, 10.0)

    def test_s_max_must_exceed_center_sum(self):
        with pytest.raises(ValueError):
            keller_osserman_table(quadratic_sum_pair(), 1.0)


class TestTailLimits:
    def test_decay_weights_give_finite_budgets(self):
        limits = tail_limits(decay_weight_pair())
        assert limits.budget1.verdict == "finite"
        # budget limit for p = 1/(1+t)^4 in this geometry is exactly 1/6
        assert limits.budget1.value == pytest.approx(1.0 / 6.0, abs=1e-6)
        assert limits.budget2.value == pytest.approx(1.0 / 6.0, abs=1e-6)
        # constant nonlinearity: growth-rate integral diverges
        assert limits.ko.verdict == "divergent"

    def test_constant_weights_give_divergent_budgets(self):
        limits = tail_limits(laplacian_unit())
        assert limits.budget1.verdict == "divergent"
        assert limits.budget2.verdict == "divergent"
        assert limits.ko.verdict == "divergent"

    def test_quadratic_nonlinearity_finite_rate(self):
        limits = tail_limits(quadratic_sum_pair())
        assert limits.ko.verdict == "finite"
        assert limits.ko.value == pytest.approx(1.0 / 16.0, abs=1e-6)

    def test_degenerate_pair_refused(self):
        p = make_problem(f1=FuncSpec2D.constant(0.0), f2=FuncSpec2D.constant(0.0))
        with pytest.raises(HypothesisViolationError):
            tail_limits(p)


class TestBuildTables:
    def test_bundle_contents(self):
        tables = build_tables(decay_weight_pair(), GRID)
        assert tables.grid is GRID
        assert tables.slope1.values[0] == 0.0
        assert (np.diff(tables.budget1.values) >= 0.0).all()
        nodes, values = tables.require_ko()
        assert nodes[0] == pytest.approx(2.0)
        assert values[0] == 0.0
        assert tables.limits is not None

    def test_auto_range_covers_budget_sum(self):
        tables = build_tables(laplacian_unit(), GRID, with_limits=False)
        need = float(tables.budget1.values[-1] + tables.budget2.values[-1])
        _, values = tables.require_ko()
        assert values[-1] >= need

    def test_without_ko(self):
        tables = build_tables(laplacian_unit(), GRID, with_limits=False, with_ko=False)
        with pytest.raises(Exception):
            tables.require_ko()

    def test_explicit_s_max_honored(self):
        tables = build_tables(
            quadratic_sum_pair(), GRID, s_max=32.0, with_limits=False
        )
        nodes, _ = tables.require_ko()
        assert nodes[-1] == pytest.approx(32.0)

    def test_plateau_stops_doubling(self):
        # bounded growth-rate integral (limit 1/16) with budgets larger
        # than the plateau: the builder must stop instead of looping
        f = FuncSpec2D.sum_power(1.0, 2.0)
        p = make_problem(f1=f, f2=f)
        tables = build_tables(p, GRID, with_limits=False)
        _, values = tables.require_ko()
        assert values[-1] < 1.0 / 16.0 + 1e-9
