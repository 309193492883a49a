import math

import numpy as np
import pytest
from scipy import integrate, optimize, stats

from ccpdmp.clock import (
    ClockOutcome,
    LinearSegment,
    PiecewiseLinearRate,
    affine_first_arrival,
    exp_rate_first_arrival,
    first_arrival,
    first_arrival_draw,
    integrated_rate,
    superposition_first_arrival,
    thinning_accept,
)
from ccpdmp.errors import EnvelopeViolationError


def plr(*segs):
    return PiecewiseLinearRate([LinearSegment(*s) for s in segs])


CONST_RATE = plr((0.0, 10.0, 2.0, 0.0))
RAMP_RATE = plr((0.0, 10.0, 0.0, 2.0))
CROSSING_RATE = plr((0.0, 3.0, -1.0, 1.0))


def quad_cumulative(rate, t):
    """Independent quadrature of max(0, rate) on [0, t]."""
    val, _ = integrate.quad(lambda s: max(0.0, rate(s)), 0.0, t, limit=200)
    return val


class TestIntegratedRate:
    def test_constant_rate(self):
        assert integrated_rate(CONST_RATE, 1.0) == pytest.approx(2.0)

    def test_linear_rate(self):
        assert integrated_rate(RAMP_RATE, 1.0) == pytest.approx(1.0)

    def test_clipped_rate_matches_quadrature(self):
        # rate max(0, s - 1) on [0, 3); oracle fixes the expected value
        oracle = quad_cumulative(lambda s: s - 1.0, 3.0)
        assert oracle == pytest.approx(2.0, abs=1e-9)
        assert integrated_rate(CROSSING_RATE, 3.0) == pytest.approx(oracle, abs=1e-9)

    def test_matches_quadrature_on_multi_segment_rate(self):
        rate = plr((0.0, 1.0, 1.0, -3.0), (1.0, 2.5, -2.0, 2.0), (2.5, 4.0, 1.0, 0.5))

        def raw(s):
            return rate.value(s)

        for t in [0.2, 0.5, 1.0, 1.7, 2.5, 3.3, 4.0]:
            assert integrated_rate(rate, t) == pytest.approx(
                quad_cumulative(raw, t), abs=1e-8
            )

    def test_monotone_and_zero_at_origin(self):
        rate = plr((0.0, 2.0, 1.5, -2.0), (2.0, 5.0, -1.0, 0.8))
        grid = np.linspace(0.0, 5.0, 400)
        vals = [integrated_rate(rate, t) for t in grid]
        assert vals[0] == 0.0
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            integrated_rate(CONST_RATE, -0.1)
        with pytest.raises(ValueError):
            integrated_rate(CONST_RATE, 10.5)


class TestFirstArrival:
    def test_constant_rate_inversion(self):
        out = first_arrival(CONST_RATE, 1.0)
        assert out.is_event and out.time == pytest.approx(0.5)

    def test_crossing_rate_matches_bisection_oracle(self):
        # oracle: bisect the quadrature cumulative, independent of the
        # closed-form inversion under test
        target = 0.5
        tau_oracle = optimize.brentq(
            lambda t: quad_cumulative(lambda s: s - 1.0, t) - target, 0.0, 3.0
        )
        assert tau_oracle == pytest.approx(2.0, abs=1e-8)
        out = first_arrival(CROSSING_RATE, target)
        assert out.is_event and out.time == pytest.approx(tau_oracle, abs=1e-8)

    def test_no_event_when_mass_insufficient(self):
        out = first_arrival(plr((0.0, 0.5, 1.0, 0.0)), 1.0)
        assert not out.is_event
        assert out.time == 0.5

    def test_negative_draw_rejected(self):
        with pytest.raises(ValueError):
            first_arrival(CONST_RATE, -1.0)

    def test_inverse_property_on_random_rates(self):
        rng = np.random.default_rng(20260809)
        for _ in range(300):
            n_seg = rng.integers(1, 4)
            bounds = np.concatenate([[0.0], np.cumsum(rng.uniform(0.3, 2.0, n_seg))])
            segs = [
                (bounds[i], bounds[i + 1], rng.normal(0, 2), rng.normal(0, 2))
                for i in range(n_seg)
            ]
            rate = plr(*segs)
            e = rng.exponential()
            out = first_arrival(rate, e)
            if out.is_event:
                assert 0.0 <= out.time < rate.horizon
                assert abs(integrated_rate(rate, out.time) - e) <= 1e-9

    def test_inverse_residual_tolerance(self):
        rng = np.random.default_rng(7)
        rate = plr((0.0, 2.0, -0.5, 1.3), (2.0, 5.0, 2.1, -0.9))
        for _ in range(500):
            e = rng.exponential()
            out = first_arrival(rate, e)
            if out.is_event:
                assert abs(integrated_rate(rate, out.time) - e) <= 1e-9


class TestDistributionalLaw:
    @pytest.mark.parametrize("rate", [CONST_RATE, RAMP_RATE, CROSSING_RATE])
    def test_arrival_times_follow_inhomogeneous_law(self, rate):
        rng = np.random.default_rng(4242)
        draws = rng.exponential(size=20_000)
        times = np.array(
            [o.time for e in draws if (o := first_arrival(rate, e)).is_event]
        )
        total = 1.0 - math.exp(-integrated_rate(rate, rate.horizon))

        def cdf(t):
            return (1.0 - np.exp(-np.array([integrated_rate(rate, x) for x in np.atleast_1d(t)]))) / total

        ks = stats.kstest(times, cdf).statistic
        assert ks < 0.03

    def test_superposition_of_constant_rates_matches_sum(self):
        # min of independent arrivals vs arrival of the summed rate
        rng = np.random.default_rng(99)
        n = 20_000
        r1 = plr((0.0, 8.0, 0.7, 0.0))
        r2 = plr((0.0, 8.0, 1.4, 0.0))
        summed = plr((0.0, 8.0, 2.1, 0.0))
        mins = []
        for _ in range(n):
            o = superposition_first_arrival(
                [first_arrival_draw(r1, rng), first_arrival_draw(r2, rng)]
            )
            if o.is_event:
                mins.append(o.time)
        direct = [
            o.time for _ in range(n) if (o := first_arrival_draw(summed, rng)).is_event
        ]
        ks = stats.ks_2samp(mins, direct).statistic
        assert ks < 0.03


class TestSuperposition:
    def test_minimum_event_wins(self):
        out = superposition_first_arrival(
            [ClockOutcome.event(1.2), ClockOutcome.event(0.7)]
        )
        assert out.is_event and out.time == 0.7

    def test_all_no_event(self):
        out = superposition_first_arrival(
            [ClockOutcome.no_event(2.0), ClockOutcome.no_event(2.0)]
        )
        assert not out.is_event and out.time == 2.0

    def test_event_beats_expiry(self):
        out = superposition_first_arrival(
            [ClockOutcome.no_event(2.0), ClockOutcome.event(1.9)]
        )
        assert out.is_event and out.time == 1.9

    def test_tie_broken_by_lowest_index(self):
        a = ClockOutcome.event(1.0)
        b = ClockOutcome.event(1.0)
        assert superposition_first_arrival([a, b]) is a

    def test_empty_list_rejected(self):
        with pytest.raises(ValueError):
            superposition_first_arrival([])

    def test_mismatched_horizons_rejected(self):
        with pytest.raises(ValueError):
            superposition_first_arrival(
                [ClockOutcome.no_event(2.0), ClockOutcome.no_event(3.0)]
            )


class TestThinningAccept:
    def test_ratio_one_always_accepts(self):
        assert thinning_accept(1.0, 1.0, 0.99)

    def test_negative_target_never_accepts(self):
        assert not thinning_accept(-0.5, 1.0, 0.0)

    def test_midpoint(self):
        assert thinning_accept(0.5, 1.0, 0.49)
        assert not thinning_accept(0.5, 1.0, 0.51)

    def test_invalid_proposal(self):
        with pytest.raises(ValueError):
            thinning_accept(0.5, 0.0, 0.5)
        with pytest.raises(ValueError):
            thinning_accept(0.5, -1.0, 0.5)

    def test_violation_raises_but_float_noise_clamps(self):
        assert thinning_accept(1.0 + 5e-9, 1.0, 1.0)  # inside tolerance: ratio 1
        with pytest.raises(EnvelopeViolationError):
            thinning_accept(1.1, 1.0, 0.5)


class TestClosedFormClocks:
    def test_affine_cases(self):
        assert affine_first_arrival(2.0, 0.0, 1.0) == pytest.approx(0.5)
        assert affine_first_arrival(0.0, 2.0, 1.0) == pytest.approx(1.0)
        assert affine_first_arrival(-1.0, 1.0, 0.5) == pytest.approx(2.0)
        assert affine_first_arrival(-1.0, 0.0, 1.0) == math.inf
        # decreasing rate with insufficient total mass never fires
        assert affine_first_arrival(1.0, -2.0, 0.5) == math.inf

    def test_affine_matches_windowed_inversion(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            a, b = rng.normal(0, 2), rng.normal(0, 2)
            e = rng.exponential()
            tau = affine_first_arrival(a, b, e)
            if math.isfinite(tau):
                rate = plr((0.0, tau + 5.0, a, b))
                out = first_arrival(rate, e)
                assert out.is_event
                assert out.time == pytest.approx(tau, abs=1e-8)

    def test_exponential_rate_inversion(self):
        # rate 2 e^(0.5 t): cumulative 4(e^(0.5 t) - 1)
        tau = exp_rate_first_arrival(2.0, 0.5, 1.0)
        assert 4.0 * (math.exp(0.5 * tau) - 1.0) == pytest.approx(1.0)
        # decaying rate, finite total mass c/|r|
        assert exp_rate_first_arrival(1.0, -2.0, 0.6) == math.inf
        assert exp_rate_first_arrival(-1.0, 1.0, 0.5) == math.inf
        assert exp_rate_first_arrival(1.0, 0.0, 0.25) == pytest.approx(0.25)


class TestConstruction:
    def test_contiguity_enforced(self):
        with pytest.raises(ValueError):
            plr((0.0, 1.0, 1.0, 0.0), (1.5, 2.0, 1.0, 0.0))

    def test_first_segment_starts_at_zero(self):
        with pytest.raises(ValueError):
            plr((0.5, 1.0, 1.0, 0.0))

    def test_degenerate_segment_rejected(self):
        with pytest.raises(ValueError):
            LinearSegment(1.0, 1.0, 0.0, 0.0)

    def test_nonfinite_coefficients_rejected(self):
        with pytest.raises(ValueError):
            LinearSegment(0.0, 1.0, math.nan, 0.0)
