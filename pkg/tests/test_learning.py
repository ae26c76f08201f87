"""Numerics of the S-curve engine and the four signal formulas."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ridewar.domain import LearningParams
from ridewar.learning import (
    EPS_CLAMP,
    UNSERVED_DELTA_U,
    ComponentState,
    Signal,
    accumulate,
    apply_update,
    driver_experience_signal,
    inverse_sigmoid,
    marketing_signal,
    sigmoid,
    traveler_experience_signal,
    unserved_signal,
    update_component,
    wom_signal,
)

BETAS = [0.5, 1.0, 2.0, 5.0]


def bisect_inverse(target, shape_beta, lo=-60.0, hi=60.0):
    """Independent oracle: solve sigmoid(x) = target by bisection."""
    for _ in range(200):
        mid = (lo + hi) / 2.0
        if 1.0 / (1.0 + math.exp(shape_beta * mid)) > target:
            lo = mid  # sigmoid decreases in x: too high means move right
        else:
            hi = mid
    return (lo + hi) / 2.0


class TestSigmoidPair:
    def test_midpoint(self):
        for beta in BETAS:
            assert sigmoid(0.0, beta) == 0.5
            assert inverse_sigmoid(0.5, beta) == 0.0

    def test_asymptotes_saturate(self):
        assert sigmoid(1e9, 1.0) == EPS_CLAMP
        assert sigmoid(-1e9, 1.0) == 1.0 - EPS_CLAMP

    def test_against_high_precision_value(self):
        # 1/(1+e^2) evaluated independently with mpmath at 50 digits
        import mpmath

        mpmath.mp.dps = 50
        expected = float(1 / (1 + mpmath.e**2))
        assert sigmoid(1.0, 2.0) == pytest.approx(expected, abs=1e-15)

    def test_inverse_against_bisection_oracle(self):
        for u in (0.7311, 0.2, 0.987):
            for beta in (1.0, 2.5):
                assert inverse_sigmoid(u, beta) == pytest.approx(
                    bisect_inverse(u, beta), abs=1e-9)

    def test_spec_quoted_inverse_value(self):
        # u = 0.7311 at unit shape sits near -1.0
        assert inverse_sigmoid(0.7311, 1.0) == pytest.approx(-1.0, abs=2e-3)

    def test_round_trip_identity(self):
        grid = np.linspace(EPS_CLAMP, 1.0 - EPS_CLAMP, 501)
        for beta in BETAS:
            back = sigmoid(inverse_sigmoid(grid, beta), beta)
            assert np.max(np.abs(back - grid)) < 1e-12

    def test_round_trip_spot_values(self):
        for u in (0.01 + EPS_CLAMP, 0.3, 0.99 - EPS_CLAMP):
            assert sigmoid(inverse_sigmoid(u, 1.0), 1.0) == pytest.approx(u, abs=1e-12)

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, 1.7])
    def test_inverse_domain_error(self, bad):
        with pytest.raises(ValueError):
            inverse_sigmoid(bad, 1.0)


class TestAccumulate:
    def test_zero_signal(self):
        assert accumulate(0.0, 1.0, 0.0) == 0.0

    def test_arithmetic(self):
        assert accumulate(2.0, 0.5, -1.0) == 1.5

    def test_repeated_positive_signal_drives_utility_down(self):
        cu = 0.0
        for _ in range(200):
            cu = accumulate(cu, 1.0, 1.0)
        assert sigmoid(cu, 1.0) == EPS_CLAMP


class TestUpdateComponent:
    params = LearningParams(alpha=1.0, shape_beta=1.0, u_init=0.5)

    def test_zero_signal_fixed_point_exact(self):
        state = ComponentState(0.37281, "experience")
        out = update_component(state, Signal(0.0, "experience"), self.params)
        assert abs(out.utility - state.utility) < 1e-12

    def test_unit_negative_signal_from_neutral(self):
        # compose the three closed forms independently: sigmoid(0 + 1 * -1)
        expected = 1.0 / (1.0 + math.exp(-1.0))
        out = update_component(ComponentState(0.5), Signal(-1.0, "experience"), self.params)
        assert out.utility == pytest.approx(expected, abs=1e-12)

    def test_extreme_opinions_move_less(self):
        d_mid = abs(apply_update(0.5, -1.0, self.params) - 0.5)
        d_ext = abs(apply_update(0.95, -1.0, self.params) - 0.95)
        assert d_ext < d_mid

    @given(st.floats(0.02, 0.98), st.floats(-3, 3), st.floats(-3, 3))
    @settings(max_examples=200, deadline=None)
    def test_monotone_in_signal(self, u, d1, d2):
        if d1 == d2:
            return
        lo, hi = min(d1, d2), max(d1, d2)
        out_lo = apply_update(u, lo, self.params)
        out_hi = apply_update(u, hi, self.params)
        assert out_hi < out_lo  # larger signal pushes utility further down

    def test_s_shape_unimodal_and_symmetric(self):
        grid = np.linspace(0.02, 0.98, 97)
        change = np.abs(apply_update(grid, -1.0, self.params) - grid)
        peak = grid[np.argmax(change)]
        assert peak == pytest.approx(0.5, abs=0.011)
        # strictly unimodal: rises to the peak, falls after it
        k = int(np.argmax(change))
        assert np.all(np.diff(change[: k + 1]) > 0)
        assert np.all(np.diff(change[k:]) < 0)
        # mirror image under a flipped signal
        flipped = np.abs(apply_update(1.0 - grid, 1.0, self.params) - (1.0 - grid))
        assert np.max(np.abs(change - flipped)) < 1e-12

    @given(st.floats(0.05, 0.95), st.lists(st.floats(-5, 5), min_size=1, max_size=60))
    @settings(max_examples=150, deadline=None)
    def test_bounded_after_any_sequence(self, u, signals):
        params = LearningParams(alpha=2.0, shape_beta=1.5, u_init=0.5)
        for d in signals:
            u = apply_update(u, d, params)
            assert EPS_CLAMP <= u <= 1.0 - EPS_CLAMP


class TestSignals:
    def test_driver_signal_unit_cases(self):
        rw = 10.63
        assert driver_experience_signal(rw, rw).delta_u == pytest.approx(0.0, abs=1e-12)
        assert driver_experience_signal(rw, 0.0).delta_u == pytest.approx(1.0, abs=1e-12)
        assert driver_experience_signal(rw, 2 * rw).delta_u == pytest.approx(-1.0, abs=1e-12)

    def test_traveler_signal_unit_cases(self):
        assert traveler_experience_signal(10.0, 10.0).delta_u == pytest.approx(0.0, abs=1e-12)
        assert traveler_experience_signal(10.0, 5.0).delta_u == pytest.approx(-0.5, abs=1e-12)
        assert unserved_signal().delta_u == UNSERVED_DELTA_U == 1.0

    def test_marketing_signal_unit_cases(self):
        near_one = 1.0 - 1e-9
        assert abs(marketing_signal(near_one, True, 0.5).delta_u) < 1e-9  # saturates
        assert marketing_signal(0.5, True, 0.1).delta_u == pytest.approx(-0.05, abs=1e-12)
        assert marketing_signal(0.5, False, 0.1).delta_u == 0.0

    def test_wom_signal_unit_cases(self):
        assert wom_signal(0.6, 0.6, 0.1, True).delta_u == pytest.approx(0.0, abs=1e-12)
        assert wom_signal(0.4, 0.8, 0.1, True).delta_u == pytest.approx(-0.04, abs=1e-12)
        assert wom_signal(0.8, 0.4, 0.1, True).delta_u == pytest.approx(0.04, abs=1e-12)
        assert wom_signal(0.4, 0.8, 0.1, False).delta_u == 0.0

    def test_sign_contracts_hold_over_random_draws(self):
        rng = np.random.default_rng(1234)
        n = 1000
        rw = rng.uniform(1.0, 30.0, n)
        income = rng.uniform(0.0, 40.0, n)
        d = driver_experience_signal(rw, income).delta_u
        assert np.all((d > 0) == (income < rw)) and np.all((d < 0) == (income > rw))

        bench = rng.uniform(1.0, 20.0, n)
        cost = rng.uniform(0.0, 30.0, n)
        d = traveler_experience_signal(bench, cost).delta_u
        assert np.all((d > 0) == (cost > bench))

        um = rng.uniform(0.01, 0.99, n)
        d = marketing_signal(um, True, 0.1).delta_u
        assert np.all(d < 0)  # exposure always pushes utility up

        own = rng.uniform(0.01, 0.99, n)
        peer = rng.uniform(0.0, 1.0, n)
        d = wom_signal(own, peer, 0.1, True).delta_u
        assert np.all(np.sign(d) == np.sign(own - peer))
