import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import expit

from ccpdmp.polyrate import (
    Polynomial,
    lagrange_upper_bound,
    poly_to_cc,
    split_concave_convex,
    taylor_upper_bound,
)

CUBIC = Polynomial([3.0, -3.0, 3.0, -1.0])  # -t^3 + 3t^2 - 3t + 3


class TestSplit:
    def test_cubic_example(self):
        convex, concave = split_concave_convex(CUBIC)
        assert convex == Polynomial([3.0, 0.0, 3.0])
        assert concave == Polynomial([0.0, -3.0, 0.0, -1.0])

    def test_affine_goes_convex(self):
        convex, concave = split_concave_convex(Polynomial([0.0, 1.0]))
        assert convex == Polynomial([0.0, 1.0])
        assert concave == Polynomial([0.0])

    def test_zero(self):
        convex, concave = split_concave_convex(Polynomial([0.0]))
        assert convex == Polynomial([0.0]) and concave == Polynomial([0.0])

    @given(
        st.lists(
            st.floats(min_value=-50, max_value=50, allow_nan=False),
            min_size=1,
            max_size=8,
        )
    )
    @settings(max_examples=200, deadline=None)
    def test_split_additivity_and_curvature(self, coeffs):
        p = Polynomial(coeffs)
        convex, concave = split_concave_convex(p)
        assert convex + concave == p
        # second finite differences certify convexity/concavity on t >= 0
        grid = np.linspace(0.0, 2.0, 41)
        h = grid[1] - grid[0]
        for part, sign in [(convex, 1.0), (concave, -1.0)]:
            vals = np.array([part.evaluate(t) for t in grid])
            second = vals[2:] - 2.0 * vals[1:-1] + vals[:-2]
            scale = max(1.0, np.abs(vals).max())
            assert np.all(sign * second >= -1e-10 * scale * h)


class TestEvalDeriv:
    def test_eval(self):
        assert Polynomial([3.0, 0.0, 3.0]).evaluate(1.0) == 6.0

    def test_deriv(self):
        assert Polynomial([0.0, -3.0, 0.0, -1.0]).derivative() == Polynomial(
            [-3.0, 0.0, -3.0]
        )

    def test_deriv_at_zero(self):
        d = Polynomial([0.0, -3.0, 0.0, -1.0]).derivative()
        assert d.evaluate(0.0) == -3.0

    def test_horner_matches_numpy(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            coeffs = rng.normal(size=rng.integers(1, 7))
            p = Polynomial(coeffs)
            t = rng.uniform(-3, 3)
            assert p.evaluate(t) == pytest.approx(
                np.polynomial.polynomial.polyval(t, coeffs), rel=1e-12, abs=1e-12
            )

    def test_arithmetic(self):
        a = Polynomial([1.0, 2.0])
        b = Polynomial([0.0, 1.0, 3.0])
        assert a + b == Polynomial([1.0, 3.0, 3.0])
        assert a * b == Polynomial([0.0, 1.0, 5.0, 6.0])
        assert 2.0 * a == Polynomial([2.0, 4.0])

    def test_degree_cap(self):
        with pytest.raises(ValueError):
            Polynomial([1.0] * 20)

    def test_trailing_zeros_ignored_for_equality(self):
        assert Polynomial([1.0, 2.0, 0.0]) == Polynomial([1.0, 2.0])


class TestTaylorBound:
    def test_first_order_formula(self):
        assert taylor_upper_bound([0.5], 0.25) == Polynomial([0.5, 0.25])

    def test_zero_everything(self):
        assert taylor_upper_bound([0.0], 0.0) == Polynomial([0.0, 0.0])

    def test_second_order_formula(self):
        assert taylor_upper_bound([1.0, -2.0], 3.0) == Polynomial([1.0, -2.0, 1.5])

    def test_dominates_logistic_rate(self):
        # single logistic observation, x=1, y=0, theta=0, v=+1: rate sigma(t)
        bound = taylor_upper_bound([0.5], 0.25)
        grid = np.linspace(0.0, 6.0, 500)
        assert np.all([bound.evaluate(t) >= expit(t) - 1e-12 for t in grid])

    def test_negative_bound_rejected(self):
        with pytest.raises(ValueError):
            taylor_upper_bound([1.0], -0.1)


class TestLagrangeBound:
    def test_exact_line(self):
        assert lagrange_upper_bound([(0.0, 0.0), (1.0, 1.0)], 0.0, 1.0) == Polynomial(
            [0.0, 1.0]
        )

    def test_exact_constant(self):
        assert lagrange_upper_bound([(0.0, 1.0), (1.0, 1.0)], 0.0, 1.0) == Polynomial(
            [1.0]
        )

    def test_quadratic_reproduced(self):
        samples = [(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)]
        poly = lagrange_upper_bound(samples, 0.0, 1.0)
        for t in np.linspace(0.0, 1.0, 20):
            assert poly.evaluate(t) == pytest.approx(t * t, abs=1e-12)

    def test_shift_dominates_smooth_function(self):
        # f = sin on [0, 1]; |f''''| <= 1 with 4 nodes (k=3)
        ts = [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]
        poly = lagrange_upper_bound([(t, math.sin(t)) for t in ts], 1.0, 1.0)
        for t in np.linspace(0.0, 1.0, 200):
            assert poly.evaluate(t) >= math.sin(t) - 1e-12

    def test_duplicate_abscissae_rejected(self):
        with pytest.raises(ValueError):
            lagrange_upper_bound([(0.0, 1.0), (0.0, 2.0)], 0.0, 1.0)


class TestPolyToCC:
    def test_cubic_values(self):
        cc = poly_to_cc(CUBIC, 1.0)
        assert cc.eval_convex(1.0) == pytest.approx(6.0)
        assert cc.eval_concave(1.0) == pytest.approx(-4.0)
        assert cc.eval_concave_deriv(1.0) == pytest.approx(-6.0)

    def test_affine_has_zero_concave_part(self):
        cc = poly_to_cc(Polynomial([2.0, 5.0]), 2.0)
        for t in np.linspace(0.0, 2.0, 10):
            assert cc.eval_concave(t) == 0.0

    def test_round_trip_sum(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            p = Polynomial(rng.normal(size=5))
            cc = poly_to_cc(p, 1.5)
            for t in np.linspace(0.0, 1.5, 15):
                assert cc.total(t) == pytest.approx(p.evaluate(t), rel=1e-12, abs=1e-12)

    def test_bad_horizon(self):
        with pytest.raises(ValueError):
            poly_to_cc(CUBIC, 0.0)
