import math

import numpy as np
import pytest
import scipy.linalg as sla

from secest import (
    ChannelParams,
    LinearSystem,
    ScalarSystem,
    ValidationError,
    critical_rates,
    feasibility_check,
    p_lower,
    p_upper,
    scalar_V,
    secrecy_interval,
    solve_S,
    solve_V,
)

P_CRIT = 1.0 - 1.0 / 1.44  # 11/36 for the a=1.2 scalar plant


def test_p_lower_scalar(scalar_sys):
    assert p_lower(scalar_sys) == pytest.approx(P_CRIT, abs=1e-14)


def test_p_lower_second_order(second_order_sys):
    assert p_lower(second_order_sys) == pytest.approx(P_CRIT, abs=1e-12)


def test_p_lower_needs_unstable_plant():
    sys = LinearSystem(A=0.9, C=1.0, Q=1.0, R=1.0, Sigma0=1.0)
    with pytest.raises(ValidationError):
        p_lower(sys)


class TestEavesdropperFloor:
    def test_pinned_trace(self, scalar_sys, channel_97):
        S = solve_S(0.5357142857142857, channel_97, scalar_sys)
        assert S.finite
        assert S.trace == pytest.approx(10.0, abs=1e-8)

    def test_full_reception_returns_process_noise(self, scalar_sys):
        # effective rate 1 kills the discount entirely
        S = solve_S(1.0, ChannelParams(0.9, 1.0), scalar_sys)
        assert S.trace == pytest.approx(1.0, abs=1e-12)

    def test_infinite_below_threshold(self, scalar_sys, channel_96):
        S = solve_S(0.4, channel_96, scalar_sys)  # rate 0.24 < 11/36
        assert not S.finite
        assert S.trace == math.inf
        assert S.matrix is None

    def test_boundary_is_infinite(self, scalar_sys):
        S = solve_S(P_CRIT, ChannelParams(1.0, 1.0), scalar_sys)
        assert not S.finite

    def test_matches_lyapunov_iteration(self, second_order_sys, channel_96):
        S = solve_S(0.8, channel_96, second_order_sys)
        alpha = 1.0 - 0.8 * 0.6
        X = np.zeros((2, 2))
        for _ in range(4000):
            X = alpha * second_order_sys.A @ X @ second_order_sys.A.T + second_order_sys.Q
        assert np.max(np.abs(S.matrix - X)) < 1e-8

    def test_decreasing_in_p(self, second_order_sys, channel_96):
        traces = [solve_S(p, channel_96, second_order_sys).trace
                  for p in (0.6, 0.7, 0.8, 0.9, 1.0)]
        assert all(t1 < t0 for t0, t1 in zip(traces, traces[1:]))


class TestFeasibility:
    def test_above_threshold(self, scalar_sys):
        assert feasibility_check(0.32, scalar_sys)
        assert feasibility_check(1.0, scalar_sys)

    def test_below_threshold(self, scalar_sys):
        assert not feasibility_check(0.29, scalar_sys)
        assert not feasibility_check(0.0, scalar_sys)

    def test_range_checked(self, scalar_sys):
        with pytest.raises(ValidationError):
            feasibility_check(-0.2, scalar_sys)


class TestCriticalUpper:
    def test_scalar_matches_lower(self, scalar_sys):
        assert p_upper(scalar_sys) - p_lower(scalar_sys) == pytest.approx(0.0, abs=1e-5)

    def test_invertible_output_matches_lower(self):
        A = np.array([[1.2, 1.0], [0.0, 1.1]])
        Q = np.array([[1.0, 0.5], [0.5, 2.0]])
        sys = LinearSystem(A=A, C=np.eye(2), Q=Q, R=np.eye(2), Sigma0=Q)
        assert p_upper(sys) - p_lower(sys) == pytest.approx(0.0, abs=1e-5)

    def test_partial_observation_sits_above_lower(self, second_order_sys):
        pu = p_upper(second_order_sys)
        assert p_lower(second_order_sys) < pu < 1.0
        # one-sided: rates above pu are certified bounded
        assert feasibility_check(pu + 1e-3, second_order_sys)

    def test_cached_per_system(self, second_order_sys):
        assert p_upper(second_order_sys) == p_upper(second_order_sys)

    def test_critical_rates_exactness_flag(self, scalar_sys, second_order_sys):
        assert critical_rates(scalar_sys).exact
        assert not critical_rates(second_order_sys).exact


class TestUserCeiling:
    def test_matches_scalar_closed_form(self, scalar_sys):
        s = ScalarSystem(1.2, 1.0, 1.0, 1.0)
        for p in (0.6, 0.75, 0.9, 1.0):
            V = solve_V(p, ChannelParams(0.9, 0.6), scalar_sys)
            assert V.trace == pytest.approx(scalar_V(0.9 * p, s), abs=1e-8)

    def test_classical_limit_matches_dare(self, second_order_sys):
        V = solve_V(1.0, ChannelParams(1.0, 1.0), second_order_sys)
        P = sla.solve_discrete_are(second_order_sys.A.T, second_order_sys.C.T,
                                   second_order_sys.Q, second_order_sys.R)
        assert np.max(np.abs(V.matrix - P)) < 1e-8

    def test_infinite_below_gate(self, scalar_sys):
        V = solve_V(0.3, ChannelParams(0.9, 0.6), scalar_sys)  # rate 0.27
        assert not V.finite and V.trace == math.inf

    def test_near_threshold_accuracy(self, scalar_sys):
        s = ScalarSystem(1.2, 1.0, 1.0, 1.0)
        rate = P_CRIT + 0.01
        V = solve_V(rate, ChannelParams(1.0, 1.0), scalar_sys)
        assert V.trace == pytest.approx(scalar_V(rate, s), abs=1e-8)

    def test_fixed_point_property(self, second_order_sys):
        from secest import riccati_map
        V = solve_V(0.8, ChannelParams(0.9, 0.6), second_order_sys)
        residual = riccati_map(V.matrix, second_order_sys, 0.8 * 0.9) - V.matrix
        assert np.max(np.abs(residual)) < 1e-7


class TestSecrecyInterval:
    def test_scalar_exact_interval(self, scalar_sys, channel_96):
        iv = secrecy_interval(scalar_sys, channel_96)
        assert not iv.empty and not iv.conservative
        assert iv.lower_exclusive == pytest.approx(P_CRIT / 0.9, abs=1e-9)
        assert iv.upper_inclusive == pytest.approx(P_CRIT / 0.6, abs=1e-9)
        assert iv.user_nominal_bounded

    def test_equal_channels_give_empty_interval(self, scalar_sys):
        iv = secrecy_interval(scalar_sys, ChannelParams(0.7, 0.7))
        assert iv.empty

    def test_eavesdropper_better_channel_empty(self, scalar_sys):
        iv = secrecy_interval(scalar_sys, ChannelParams(0.6, 0.9))
        assert iv.empty

    def test_conservative_branch(self, second_order_sys, channel_96):
        iv = secrecy_interval(second_order_sys, channel_96)
        assert iv.conservative
        assert iv.lower_exclusive == pytest.approx(
            p_upper(second_order_sys) / 0.9, rel=1e-9)
        assert iv.upper_inclusive == pytest.approx(P_CRIT / 0.6, abs=1e-9)
        assert not iv.empty

    def test_upper_capped_at_one(self, scalar_sys):
        iv = secrecy_interval(scalar_sys, ChannelParams(0.9, 0.25))
        assert iv.upper_inclusive == 1.0
