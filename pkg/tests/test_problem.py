import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import make_problem, make_spec
from khess import (
    FuncSpec1D,
    FuncSpec2D,
    HypothesisViolationError,
    ensure_validated,
    parse_func_1d,
    parse_func_2d,
    validate_problem,
)


class TestNormalizationConstant:
    def test_binomial_identity_all_orders(self):
        # C(N-1, k-1)/k and C(N, k)/N agree for every admissible pair
        for dim in range(3, 9):
            for k in range(1, dim + 1):
                left = Fraction(math.comb(dim - 1, k - 1), k)
                right = Fraction(math.comb(dim, k), dim)
                assert left == right

    def test_values_on_problem(self):
        p = make_problem(dim=3, k1=1, k2=3)
        assert p.norm_const1 == pytest.approx(1.0)  # C(2,0)/1
        assert p.norm_const2 == pytest.approx(1.0 / 3.0)  # C(2,2)/3
        assert p.binom1 == 1
        assert p.binom2 == 1

    def test_middle_order(self):
        p = make_problem(dim=5, k1=2, k2=2)
        # C(4,1)/2 = 2 = C(5,2)/5
        assert p.norm_const1 == pytest.approx(2.0)
        assert p.binom1 == 4


class TestStructuralChecks:
    def test_dimension_too_small(self):
        with pytest.raises(HypothesisViolationError):
            validate_problem(make_spec(dim=2))

    def test_dimension_not_integer(self):
        with pytest.raises(HypothesisViolationError):
            validate_problem(make_spec(dim=3.5))

    def test_order_out_of_range(self):
        with pytest.raises(HypothesisViolationError):
            validate_problem(make_spec(dim=3, k1=4))
        with pytest.raises(HypothesisViolationError):
            validate_problem(make_spec(dim=3, k2=0))

    def test_negative_center(self):
        with pytest.raises(HypothesisViolationError):
            validate_problem(make_spec(a1=-1.0))

    def test_both_centers_zero(self):
        with pytest.raises(HypothesisViolationError):
            validate_problem(make_spec(a1=0.0, a2=0.0))

    def test_one_center_zero_is_fine(self):
        p = make_problem(a1=0.0, a2=1.0)
        assert p.center_sum == 1.0

    def test_negative_drift_rejected(self):
        with pytest.raises(HypothesisViolationError):
            validate_problem(make_spec(b1=parse_func_1d("0 - 1")))

    def test_negative_source_rejected(self):
        with pytest.raises(HypothesisViolationError):
            validate_problem(make_spec(p2=parse_func_1d("0 - t")))

    def test_decreasing_nonlinearity_rejected(self):
        with pytest.raises(HypothesisViolationError) as exc:
            validate_problem(make_spec(f1=parse_func_2d("(u-5)^2 + (v-5)^2")))
        assert "f1" in str(exc.value)

    def test_valid_problem_passes(self):
        p = make_problem(
            dim=4,
            k1=2,
            k2=1,
            b1=FuncSpec1D.constant(0.5),
            p1=FuncSpec1D.decay(1.0, 2.0),
            f1=FuncSpec2D.sum_power(1.0, 0.5),
        )
        assert p.dim == 4
        assert p.ko_denominator_positive


class TestDerivedAccessors:
    def test_component_views(self):
        p = make_problem(dim=3, k1=1, k2=3)
        c1 = p.component(1)
        c2 = p.component(2)
        assert c1.order == 1 and c2.order == 3
        assert c1.index == 1 and c2.index == 2
        assert c1.center == p.a1
        with pytest.raises(ValueError):
            p.component(3)

    def test_center_sum(self):
        p = make_problem(a1=0.5, a2=1.5)
        assert p.center_sum == 2.0

    def test_nonlinearity_root(self):
        f = FuncSpec2D.sum_power(1.0, 2.0)
        p = make_problem(k1=2, f1=f)
        # ((u+v)^2)^(1/2) = u+v
        assert float(p.nonlinearity_root(1, 1.0, 3.0)) == pytest.approx(4.0)

    def test_ko_denominator(self):
        f = FuncSpec2D.sum_power(1.0, 2.0)
        p = make_problem(f1=f, f2=f)
        # both components contribute (t+t)^2
        assert float(p.ko_denominator(2.0)) == pytest.approx(32.0)

    def test_degenerate_nonlinearity_flagged_not_rejected(self):
        p = make_problem(f1=FuncSpec2D.constant(0.0), f2=FuncSpec2D.constant(0.0))
        assert not p.ko_denominator_positive

    def test_ensure_validated_idempotent(self):
        p = make_problem()
        assert ensure_validated(p) is p
        again = ensure_validated(make_spec())
        assert again.dim == 3

    def test_weight_vector_evaluation(self):
        p = make_problem(p1=FuncSpec1D.decay(2.0, 3.0))
        t = np.array([0.0, 1.0])
        assert np.allclose(p.p1(t), [2.0, 0.25])
