# -*- coding: utf-8 -*-
import dataclasses
import math

import numpy as np
import pytest

from noisy_emergence.domain.errors import DomainError
from noisy_emergence.domain.models.coupling import KernelKind, KernelSpec
from noisy_emergence.domain.models.noise import NoiseKind, NoiseSpec, PathNoiseSpec
from noisy_emergence.domain.models.system import IdentityJ, SystemParams, SystemState, SystemVariant
from noisy_emergence.domain.models.theory import HypothesisCase, TheoremTag
from noisy_emergence.domain.services.noise_service import (
    STREAM_H1,
    STREAM_H2,
    NoiseDrawer,
    PathNoiseDrawer,
    SeedStream,
)
from noisy_emergence.domain.services.quotient_space import quotient_norm
from noisy_emergence.domain.services.systems import integrate_IC, run_discrete
from noisy_emergence.domain.services.theory import (
    cauchy_tail,
    check_hypotheses_thm1,
    check_hypotheses_thm2,
    constants_IC,
    constants_ID,
    constants_IIC,
    constants_IID,
    default_theorem,
    iteration_count,
    positive_root,
    probability_bound,
    q_of_delta,
    root_upper_bound,
    verify_trajectory,
)
from tests.factories import complete_kernel, flocking_params, random_state, scaled_state


def _bisection_root(s, q, c1, c2):
    lo, hi = 0.0, root_upper_bound(s, q, c1, c2)
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if mid ** s - c1 * mid ** q - c2 < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestScalarFunctions:

    def test_q_of_delta(self):
        assert q_of_delta(2.0) == 1.0
        assert q_of_delta(0.25) == 4.0
        with pytest.raises(DomainError):
            q_of_delta(0.0)

    def test_positive_root_of_a_quadratic(self):
        # z² − z − 2 = (z − 2)(z + 1)
        assert positive_root(2.0, 1.0, 1.0, 2.0) == pytest.approx(2.0, rel=1e-14)
        assert positive_root(2.0, 1.0, 3.0, 4.0) == pytest.approx(4.0, rel=1e-14)
        assert root_upper_bound(2.0, 1.0, 3.0, 4.0) == pytest.approx(6.0)

    def test_positive_root_of_the_plastic_cubic(self):
        # con u = √z: u³ − u − 1 = 0
        assert positive_root(1.5, 0.5, 1.0, 1.0) == pytest.approx(1.3247179572447460 ** 2, rel=1e-12)

    @pytest.mark.parametrize("s,q,c1,c2", [(1.5, 0.5, 3.0, 0.1), (3.0, 1.0, 1.0, 1.0),
                                           (3.0, 2.5, 0.01, 100.0), (1.2, 1.0, 5.0, 5.0)])
    def test_positive_root_residual(self, s, q, c1, c2):
        z = positive_root(s, q, c1, c2)
        assert z > 0
        assert abs(z ** s - c1 * z ** q - c2) <= 1e-9 * max(1.0, c2)

    def test_positive_root_agrees_with_bisection(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            s = rng.uniform(0.5, 3.0)
            q = s * rng.uniform(0.1, 0.9)
            c1, c2 = 10.0 ** rng.uniform(-1.5, 1.5, size=2)
            z = positive_root(s, q, c1, c2)
            assert z == pytest.approx(_bisection_root(s, q, c1, c2), rel=1e-10)
            assert z <= root_upper_bound(s, q, c1, c2)
            below = np.linspace(0.0, z, 101)[:-1]
            assert np.all(below ** s - c1 * below ** q - c2 <= 0.0)

    def test_positive_root_requires_s_above_q(self):
        with pytest.raises(DomainError):
            positive_root(1.0, 1.0, 1.0, 1.0)

    def test_iteration_count_rounds_up(self):
        assert iteration_count(3.2) == 4
        assert iteration_count(92.0000000001) == 92
        assert iteration_count(0.0) == 0


class TestConstants:

    def test_discrete_flocking_case_i(self):
        k = 10
        params = flocking_params(k)
        state = random_state(k, 2)
        c = constants_ID(state, params, nu=0.05)
        nx0, ny0 = quotient_norm(state.x), quotient_norm(state.y)
        a = (2.0 / k) * ny0
        U0 = max((2 * a) ** 2, 2 * (1 + nx0))
        assert c.case is HypothesisCase.I
        assert c.a == pytest.approx(a)
        assert c.U0 == pytest.approx(U0)
        assert c.H0 == pytest.approx(2 ** -1.5 * k / math.sqrt(U0))
        assert c.H0 <= k / 2
        assert c.T0 == pytest.approx(2 * math.sqrt(U0) / (0.05 * k) * math.log(ny0 / 0.05))
        assert c.applicable

    def test_discrete_hand_computed_example(self):
        params = SystemParams(variant=SystemVariant.I_D, coupling=1.0, beta=0.5, h=0.1,
                              kernel=KernelSpec(KernelKind.CUCKER_SMALE, 1.0, 0.5))
        state = scaled_state(4, 2, 0.0, 0.5)
        c = constants_ID(state, params, nu=0.05)
        assert c.case is HypothesisCase.I
        assert c.a == pytest.approx(1.0)
        assert c.b == pytest.approx(1.0)
        assert c.U0 == pytest.approx(4.0)
        assert c.B0 == pytest.approx(3.0)
        assert c.H0 == pytest.approx(1.0 / (4.0 * math.sqrt(2.0)))
        assert c.H0 == pytest.approx(0.17678, abs=1e-5)
        assert c.h_max == pytest.approx(1.0)
        assert c.T0 == pytest.approx(40.0 * math.log(10.0))
        assert c.T0 == pytest.approx(92.103, abs=1e-3)
        assert iteration_count(c.T0) == 93
        assert constants_ID(state, params, mu=c.x_cap, nu=0.05).T1 == 0.0

    def test_continuous_hand_computed_example(self):
        params = SystemParams(variant=SystemVariant.I_C, coupling=1.0, beta=0.0,
                              kernel=complete_kernel(continuous=True))
        state = scaled_state(4, 2, 0.0, 0.5)
        c = constants_IC(state, params, nu=0.05)
        assert c.case is HypothesisCase.I
        assert c.a == pytest.approx(0.5)
        assert c.b == pytest.approx(2.0)
        assert c.alpha == 0.0
        assert c.U0 == pytest.approx(4.0)
        assert c.B0 == pytest.approx(3.0)
        assert c.B1 == pytest.approx(1.0)
        assert c.T0 == pytest.approx(4.60517, abs=1e-5)
        assert constants_IC(state, params, mu=c.B1, nu=0.05).T1 == 0.0

    def test_case_i_radius_solves_the_growth_inequality(self):
        rng = np.random.default_rng(2024)
        for _ in range(200):
            beta = rng.uniform(0.05, 0.6)
            gamma = rng.uniform(0.0, min(0.9, 0.95 - beta))
            G = rng.uniform(0.5, 10.0)
            params = SystemParams(variant=SystemVariant.I_D, coupling=G, beta=beta, h=0.01,
                                  kernel=KernelSpec(KernelKind.CUCKER_SMALE, 1.0, beta),
                                  j_operator=IdentityJ(C=rng.uniform(0.1, 3.0), gamma=gamma,
                                                       delta=rng.uniform(0.3, 2.0)))
            state = scaled_state(5, 2, rng.uniform(0.0, 3.0), rng.uniform(0.01, 2.0))
            c = constants_ID(state, params)
            assert c.case is HypothesisCase.I
            growth = c.U0 - c.a * c.U0 ** c.exponent - c.b
            assert growth >= -1e-12 * c.U0
            assert c.H0 < G / 2.0

    def test_case_boundaries(self):
        state = random_state(5, 2)
        case_ii = SystemParams(variant=SystemVariant.I_D, coupling=5.0, beta=0.6, h=0.01,
                               kernel=KernelSpec(KernelKind.CUCKER_SMALE, 1.0, 0.6),
                               j_operator=IdentityJ(gamma=0.4))
        case_iii = SystemParams(variant=SystemVariant.I_D, coupling=5.0, beta=1.0, h=0.01,
                                kernel=KernelSpec(KernelKind.CUCKER_SMALE, 1.0, 1.0),
                                j_operator=IdentityJ(gamma=0.5))
        assert constants_ID(state, case_ii).case is HypothesisCase.II
        assert constants_ID(state, case_iii).case is HypothesisCase.III

    def test_case_ii_needs_a_below_one(self):
        state = SystemState(x=random_state(5, 2).x, y=random_state(5, 2, y_scale=10.0).y)
        params = SystemParams(variant=SystemVariant.I_D, coupling=5.0, beta=1.0, h=0.01,
                              kernel=KernelSpec(KernelKind.CUCKER_SMALE, 1.0, 1.0))
        c = constants_ID(state, params, nu=0.05)
        assert c.case is HypothesisCase.II
        assert math.isinf(c.U0)
        assert not c.applicable

    def test_velocity_target_must_be_below_the_initial_norm(self):
        state = random_state(10, 2)
        ny0 = quotient_norm(state.y)
        c = constants_ID(state, flocking_params(10), nu=ny0)
        assert c.T0 is None
        assert c.reasons

    def test_zero_initial_velocity_is_rejected(self):
        state = SystemState(x=random_state(5, 2).x, y=np.zeros((5, 2)))
        with pytest.raises(DomainError):
            constants_ID(state, flocking_params(5), nu=0.05)

    def test_coupled_discrete_constants(self):
        k = 5
        params = SystemParams(variant=SystemVariant.II_D, coupling_1=5.0, coupling_2=5.0, h_1=0.1, h_2=0.1,
                              kernel_x=complete_kernel(), kernel_y=complete_kernel())
        state = random_state(k, 2, y_scale=0.5)
        nx0, ny0 = quotient_norm(state.x), quotient_norm(state.y)
        c = constants_IID(state, params, mu=nx0, nu=0.05)
        assert c.H1 == pytest.approx(2.5) and c.H2 == pytest.approx(2.5)
        assert c.T2 == 0.0
        assert c.T3 == pytest.approx(math.log(ny0 / 0.05) / 0.25)
        assert c.applicable

    def test_coupled_discrete_step_limit(self):
        params = SystemParams(variant=SystemVariant.II_D, coupling_1=5.0, coupling_2=5.0, h_1=0.2, h_2=0.1,
                              kernel_x=complete_kernel(), kernel_y=complete_kernel())
        c = constants_IID(random_state(5, 2, y_scale=0.5), params, mu=0.1, nu=0.05)
        assert not c.applicable
        assert not check_hypotheses_thm2(None, params).passed

    def test_continuous_flocking_constants(self):
        k = 10
        params = SystemParams(variant=SystemVariant.I_C, coupling=float(k), beta=0.0,
                              kernel=complete_kernel(continuous=True))
        state = random_state(k, 2)
        ny0 = quotient_norm(state.y)
        c = constants_IC(state, params, nu=0.05)
        assert c.case is HypothesisCase.I
        assert c.H0 == pytest.approx(k / 2)
        assert c.T0 == pytest.approx((2.0 / k) * math.log(ny0 / 0.05))

    def test_continuous_coupled_constants(self):
        params = SystemParams(variant=SystemVariant.II_C, coupling_1=5.0, coupling_2=5.0,
                              kernel_x=complete_kernel(True), kernel_y=complete_kernel(True))
        state = random_state(5, 2, y_scale=0.5)
        c = constants_IIC(state, params, mu=0.1, nu=0.05)
        assert c.H1 == pytest.approx(2.5)
        assert c.T2 == pytest.approx(math.log(quotient_norm(state.x) / 0.1) / 2.5)


class TestHypotheses:

    def test_flocking_preset_is_certified(self):
        params = flocking_params(10)
        state = random_state(10, 2)
        check = check_hypotheses_thm1(state, params)
        assert check.case is HypothesisCase.I
        assert check.passed

    def test_step_above_the_limit_fails(self):
        params = flocking_params(10, h=0.2)
        check = check_hypotheses_thm1(random_state(10, 2), params)
        assert not check.passed
        assert any(c.name == "step_bound" and not c.passed for c in check.checks)

    @pytest.mark.parametrize("norm_y,expected", [(0.4, True), (0.6, False)])
    def test_case_ii_initial_velocity_limit(self, norm_y, expected):
        # G = C = Q = δ = 1: se requiere ||y(0)|| < 1/2
        params = SystemParams(variant=SystemVariant.I_D, coupling=1.0, beta=1.0, h=0.1,
                              kernel=KernelSpec(KernelKind.CUCKER_SMALE, 1.0, 1.0))
        check = check_hypotheses_thm1(scaled_state(4, 2, 0.0, norm_y), params)
        assert check.case is HypothesisCase.II
        velocity = next(c for c in check.checks if c.name == "case_ii_initial_velocity")
        assert velocity.rhs == pytest.approx(0.5)
        assert velocity.passed is expected
        assert check.passed is expected


class TestProbabilityBounds:

    def _flocking_constants(self):
        return constants_ID(random_state(10, 2), flocking_params(10), nu=0.05)

    def test_discrete_bound_is_a_power_of_F(self):
        c = self._flocking_constants()
        report = probability_bound(TheoremTag.THM1, c, [lambda x: 0.99])
        count = iteration_count(c.T0)
        assert report.horizon == count
        assert report.probability == pytest.approx(0.99 ** count)
        assert report.thresholds["F"] == pytest.approx(c.H0 * 0.05)

    def test_longer_horizon_never_raises_the_bound(self):
        c = self._flocking_constants()
        bounds = [probability_bound(TheoremTag.THM1, dataclasses.replace(c, T0=T), [lambda x: 0.99]).probability
                  for T in (10.0, 50.0, 99.5, 200.0)]
        assert bounds == sorted(bounds, reverse=True)
        assert bounds[2] == pytest.approx(0.99 ** 100)
        assert bounds[2] == pytest.approx(0.36603, abs=1e-5)

    def test_bound_is_monotone_in_the_target_and_the_radius(self, noise_service):
        k = 10
        params = flocking_params(k)
        state = random_state(k, 2)
        ny0 = quotient_norm(state.y)
        scale = constants_ID(state, params).H0 * ny0

        def bound(nu, radius):
            spec = NoiseSpec(NoiseKind.BALL, k=k, d=2, radius=radius)
            c = constants_ID(state, params, nu=nu)
            return probability_bound(TheoremTag.THM1, c, [lambda x: noise_service.norm_cdf(spec, x)]).probability

        by_target = [bound(f * ny0, 0.15 * scale) for f in (0.1, 0.2, 0.4, 0.8)]
        assert by_target == sorted(by_target)
        assert by_target[-1] > by_target[0]
        by_radius = [bound(0.4 * ny0, f * scale) for f in (0.075, 0.15, 0.3, 0.6)]
        assert by_radius == sorted(by_radius, reverse=True)
        assert by_radius[0] > by_radius[-1]

    def test_zero_noise_gives_one(self):
        report = probability_bound(TheoremTag.THM1, self._flocking_constants(), [None])
        assert report.probability == 1.0
        assert report.applicable

    def test_ball_bound_matches_the_closed_form(self, noise_service):
        c = self._flocking_constants()
        spec = NoiseSpec(NoiseKind.BALL, k=10, d=2, radius=0.1)
        report = probability_bound(TheoremTag.THM1, c, [lambda x: noise_service.norm_cdf(spec, x)])
        expected = min(1.0, (c.H0 * 0.05 / 0.1) ** 18) ** iteration_count(c.T0)
        assert report.probability == pytest.approx(expected, rel=1e-12)

    def test_coupled_discrete_bound_multiplies_both_sources(self):
        params = SystemParams(variant=SystemVariant.II_D, coupling_1=5.0, coupling_2=5.0, h_1=0.1, h_2=0.1,
                              kernel_x=complete_kernel(), kernel_y=complete_kernel())
        c = constants_IID(random_state(5, 2, y_scale=0.5), params, mu=0.1, nu=0.05)
        report = probability_bound(TheoremTag.THM2, c, [lambda x: 0.9, lambda x: 0.8])
        count = iteration_count(max(c.T2, c.T3))
        assert report.probability == pytest.approx((0.72) ** count)

    def test_continuous_coupled_bounds(self):
        params = SystemParams(variant=SystemVariant.II_C, coupling_1=5.0, coupling_2=5.0,
                              kernel_x=complete_kernel(True), kernel_y=complete_kernel(True))
        c = constants_IIC(random_state(5, 2, y_scale=0.5), params, mu=0.1, nu=0.05)
        both = probability_bound(TheoremTag.THM4, c, [lambda x, T: 0.9, lambda x, T: 0.5])
        assert both.probability == pytest.approx(0.45)
        one = probability_bound(TheoremTag.COR1, c, [None, lambda x, T: 0.7])
        assert one.probability == pytest.approx(0.7)
        neither = probability_bound(TheoremTag.COR1, c, [lambda x, T: 0.9, lambda x, T: 0.5])
        assert neither.probability is None and neither.reasons

    def test_default_theorem(self):
        assert default_theorem(SystemVariant.I_D, [None]) is TheoremTag.THM1
        assert default_theorem(SystemVariant.I_C, [None], joint=True) is TheoremTag.THM3_JOINT
        assert default_theorem(SystemVariant.II_C, [None, object()]) is TheoremTag.COR1
        assert default_theorem(SystemVariant.II_C, [object(), object()]) is TheoremTag.THM4


class TestTrajectoryVerification:

    def test_noise_free_flocking_respects_every_envelope(self):
        k = 10
        params = flocking_params(k)
        state = random_state(k, 2)
        c = constants_ID(state, params, nu=0.05)
        trajectory = run_discrete(state, params, [None], steps=150)
        report = verify_trajectory(trajectory, c, params)
        assert not report.skipped
        assert report.passed, [check.to_dict() for check in report.checks if not check.passed]
        assert {check.name for check in report.checks} >= {"step_factor", "velocity_envelope",
                                                           "position_bound", "limit_point"}

    def test_clipped_noise_respects_every_envelope(self):
        k = 10
        params = flocking_params(k)
        state = random_state(k, 2, seed=3)
        c = constants_ID(state, params, nu=0.05)
        spec = NoiseSpec(NoiseKind.GAUSSIAN, k=k, d=2, sigma=0.05)
        drawer = NoiseDrawer(spec, SeedStream(9), clip_threshold=c.H0)
        trajectory = run_discrete(state, params, [drawer], steps=100)
        assert trajectory.clipped.any()
        report = verify_trajectory(trajectory, c, params)
        assert report.passed

    def test_clipped_continuous_run_respects_the_energy_decay(self):
        k = 6
        params = SystemParams(variant=SystemVariant.I_C, coupling=float(k), beta=0.0,
                              kernel=complete_kernel(continuous=True))
        state = random_state(k, 2, seed=5)
        c = constants_IC(state, params, nu=0.1 * quotient_norm(state.y))
        spec = PathNoiseSpec(NoiseSpec(NoiseKind.GAUSSIAN, k=k, d=2, sigma=1.0), refresh=0.01)
        drawer = PathNoiseDrawer(spec, SeedStream(8), dt=0.01, clip_threshold=c.H0)
        trajectory = integrate_IC(state, params, drawer, dt=0.01, T=1.0)
        assert trajectory.clipped.any()
        report = verify_trajectory(trajectory, c, params)
        assert not report.skipped
        assert report.passed, [check.to_dict() for check in report.checks if not check.passed]
        assert {check.name for check in report.checks} >= {"energy_decay", "state_bound", "position_bound",
                                                           "energy_envelope", "limit_point"}

    def test_clipped_coupled_run_with_distance_dependent_weights(self):
        # β₁ acompaña a g (kernel_y, actúa sobre x) y β₂ a f (kernel_x, actúa sobre y)
        k = 5
        params = SystemParams(variant=SystemVariant.II_D, coupling_1=float(k), coupling_2=float(k),
                              beta_1=1.0, beta_2=0.5, h_1=0.1, h_2=0.1,
                              kernel_x=KernelSpec(KernelKind.CUCKER_SMALE, 1.0, 0.5),
                              kernel_y=KernelSpec(KernelKind.CUCKER_SMALE, 1.0, 1.0))
        state = random_state(k, 2, seed=4, y_scale=0.5)
        c = constants_IID(state, params)
        spec = NoiseSpec(NoiseKind.GAUSSIAN, k=k, d=2, sigma=1.0)
        drawers = [NoiseDrawer(spec, SeedStream(4, stream=STREAM_H1), clip_threshold=c.H1),
                   NoiseDrawer(spec, SeedStream(4, stream=STREAM_H2), clip_threshold=c.H2)]
        trajectory = run_discrete(state, params, drawers, steps=60)
        assert trajectory.clipped.any()
        report = verify_trajectory(trajectory, c, params)
        assert not report.skipped
        assert report.passed, [check.to_dict() for check in report.checks if not check.passed]
        assert {check.name for check in report.checks} == {"step_factor_x", "step_factor_y",
                                                           "position_envelope", "velocity_envelope"}

    def test_unclipped_noise_is_skipped(self):
        k = 10
        params = flocking_params(k)
        state = random_state(k, 2)
        c = constants_ID(state, params, nu=0.05)
        drawer = NoiseDrawer(NoiseSpec(NoiseKind.BALL, k=k, d=2, radius=0.01), SeedStream(0))
        report = verify_trajectory(run_discrete(state, params, [drawer], steps=10), c, params)
        assert report.skipped and report.notice

    def test_a_too_fast_envelope_is_reported(self):
        k = 10
        params = flocking_params(k)
        state = random_state(k, 2)
        c = dataclasses.replace(constants_ID(state, params, nu=0.05), contraction=0.1)
        report = verify_trajectory(run_discrete(state, params, [None], steps=20), c, params)
        assert not report.check("velocity_envelope").passed
        assert report.check("velocity_envelope").first_violation == 1

    def test_cauchy_tail(self):
        k = 10
        params = flocking_params(k)
        trajectory = run_discrete(random_state(k, 2), params, [None], steps=80)
        assert cauchy_tail(trajectory, params, 40, 1.0).passed
        assert not cauchy_tail(trajectory, params, 0, 1e-6).passed
