# -*- coding: utf-8 -*-
import numpy as np
import pytest

from noisy_emergence.domain.errors import DomainError
from noisy_emergence.domain.models.noise import NoiseKind, NoiseSpec, PathNoiseSpec
from noisy_emergence.domain.models.system import ScaledJ, SystemParams, SystemState, SystemVariant
from noisy_emergence.domain.services.noise_service import NoiseDrawer, PathNoiseDrawer, SeedStream
from noisy_emergence.domain.services.quotient_space import quotient_norm
from noisy_emergence.domain.services.systems import (
    detect_emergence,
    integrate_IC,
    integrate_IIC,
    j_operator,
    run_discrete,
    step_ID,
    step_IID,
)
from tests.factories import complete_kernel, flocking_params, random_state, scaled_state


def _complete_ID(k, h=0.05):
    return SystemParams(variant=SystemVariant.I_D, coupling=float(k), beta=0.0, h=h, kernel=complete_kernel())


def _complete_IID(k, h=0.1):
    return SystemParams(variant=SystemVariant.II_D, coupling_1=float(k), coupling_2=float(k), h_1=h, h_2=h,
                        kernel_x=complete_kernel(), kernel_y=complete_kernel())


def _complete_IC(k):
    return SystemParams(variant=SystemVariant.I_C, coupling=float(k), beta=0.0,
                        kernel=complete_kernel(continuous=True))


class TestDiscreteSteps:

    def test_step_ID_with_complete_weights(self):
        k, h = 6, 0.05
        state = random_state(k, 2)
        new = step_ID(state, _complete_ID(k, h))
        np.testing.assert_allclose(new.y, (1 - h * k) * state.y, atol=1e-14)
        np.testing.assert_allclose(new.x, state.x + h * state.y, atol=1e-14)
        assert new.t == 1 and new.time == pytest.approx(h)

    def test_step_ID_keeps_representatives_centered(self):
        params = flocking_params(8)
        state = random_state(8, 3, seed=2)
        noise = np.random.default_rng(0).normal(size=(8, 3))
        new = step_ID(state, params, noise)
        np.testing.assert_allclose(new.x.sum(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(new.y.sum(axis=0), 0.0, atol=1e-12)

    def test_step_ID_conserves_the_mean_velocity(self):
        state = random_state(5, 2)
        mean = np.array([[0.3, -0.2]])
        state = SystemState(x=state.x, y=state.y, y_mean=mean)
        new = step_ID(state, flocking_params(5))
        np.testing.assert_allclose(new.y_mean, mean, atol=1e-14)

    def test_step_IID_uses_the_previous_state(self):
        k, h = 5, 0.1
        state = random_state(k, 2, y_scale=0.5)
        new = step_IID(state, _complete_IID(k, h))
        np.testing.assert_allclose(new.x, (1 - h * k) * state.x, atol=1e-14)
        np.testing.assert_allclose(new.y, (1 - h * k) * state.y, atol=1e-14)
        assert (new.t1, new.t2) == (1, 1)

    def test_j_bound_violation_is_flagged(self):
        params = SystemParams(variant=SystemVariant.I_D, coupling=5.0, beta=0.0, h=0.05,
                              kernel=complete_kernel(), j_operator=ScaledJ(2.0, C=1.0))
        state = random_state(5, 2)
        evaluation = j_operator(state.x, state.y, params)
        assert evaluation.violated
        assert step_ID(state, params).j_violations == 1


class TestRunDiscrete:

    def test_noise_free_run_records_every_step(self):
        params = flocking_params(10)
        trajectory = run_discrete(random_state(10, 2), params, [None], steps=30)
        assert trajectory.length == 31
        assert trajectory.noise_free and trajectory.conditioned
        assert np.all(np.diff(trajectory.norm_y) <= 1e-15)
        assert np.all(trajectory.coercivity > 0)

    def test_stop_condition(self):
        trajectory = run_discrete(random_state(10, 2), flocking_params(10), [None], steps=500,
                                  stop_when=lambda nx, ny: ny <= 0.05)
        assert trajectory.norm_y[-1] <= 0.05
        assert trajectory.length < 501

    def test_blow_up_aborts_the_run(self):
        params = _complete_ID(5, h=1.0)
        trajectory = run_discrete(random_state(5, 2), params, [None], steps=200)
        assert trajectory.aborted is not None
        assert trajectory.length < 201

    def test_noise_is_recorded_and_clipped(self):
        k = 6
        spec = NoiseSpec(NoiseKind.GAUSSIAN, k=k, d=2, sigma=1.0)
        drawer = NoiseDrawer(spec, SeedStream(3), clip_threshold=0.1)
        trajectory = run_discrete(random_state(k, 2), flocking_params(k), [drawer], steps=10)
        assert trajectory.clipped[:-1].all()
        assert trajectory.clip_thresholds == (0.1,)
        assert trajectory.conditioned
        assert np.all(trajectory.noise_norms[:-1, 0] > 0)

    def test_coupled_run_has_two_noise_columns(self):
        k = 5
        spec = NoiseSpec(NoiseKind.BALL, k=k, d=2, radius=0.01)
        drawers = [NoiseDrawer(spec, SeedStream(1, stream=0)), NoiseDrawer(spec, SeedStream(1, stream=1))]
        trajectory = run_discrete(random_state(k, 2, y_scale=0.5), _complete_IID(k), drawers, steps=5)
        assert trajectory.noise_norms.shape == (6, 2)
        assert trajectory.coercivity_2 is not None
        assert not trajectory.conditioned

    def test_continuous_variant_is_rejected(self):
        with pytest.raises(DomainError):
            run_discrete(random_state(5, 2), _complete_IC(5), [None], steps=3)


class TestIntegration:

    def test_euler_with_complete_weights(self):
        k, dt = 6, 0.01
        state = random_state(k, 2)
        trajectory = integrate_IC(state, _complete_IC(k), dt=dt, T=0.1)
        assert trajectory.length == 11
        expected = (1 - dt * k) ** 10 * quotient_norm(state.y)
        assert trajectory.norm_y[-1] == pytest.approx(expected, rel=1e-10)

    def test_rk4_tracks_the_exponential_decay(self):
        k = 6
        state = random_state(k, 2)
        trajectory = integrate_IC(state, _complete_IC(k), dt=0.01, T=0.5, method='rk4')
        expected = np.exp(-k * 0.5) * quotient_norm(state.y)
        assert trajectory.norm_y[-1] == pytest.approx(expected, rel=1e-6)

    def test_halving_the_step_halves_the_euler_error(self):
        k = 6
        state = random_state(k, 2)
        errors = []
        for dt in (0.004, 0.002):
            trajectory = integrate_IC(state, _complete_IC(k), dt=dt, T=0.5)
            exact = quotient_norm(state.y) * np.exp(-k * trajectory.times[-1])
            errors.append(abs(trajectory.norm_y[-1] - exact))
        assert errors[0] / errors[1] == pytest.approx(2.0, rel=0.05)

    def test_emergence_time_is_stable_under_step_halving(self):
        k = 6
        state = random_state(k, 2, seed=2)
        nu = 0.1 * quotient_norm(state.y)
        spec = PathNoiseSpec(NoiseSpec(NoiseKind.BALL, k=k, d=2, radius=0.05 * nu), refresh=0.05)
        times = []
        for dt in (0.002, 0.001):
            drawer = PathNoiseDrawer(spec, SeedStream(3), dt=dt)
            trajectory = integrate_IC(state, _complete_IC(k), drawer, dt=dt, T=1.0)
            times.append(detect_emergence(trajectory, None, nu).y_time)
        assert None not in times
        assert abs(times[0] - times[1]) <= 0.05 * times[1]

    def test_rk4_refuses_noise(self):
        spec = PathNoiseSpec(NoiseSpec(NoiseKind.BALL, k=5, d=2, radius=0.01), refresh=0.1)
        drawer = PathNoiseDrawer(spec, SeedStream(0), dt=0.01)
        with pytest.raises(DomainError):
            integrate_IC(random_state(5, 2), _complete_IC(5), drawer, dt=0.01, T=0.1, method='rk4')

    def test_unknown_method_is_rejected(self):
        with pytest.raises(DomainError):
            integrate_IC(random_state(5, 2), _complete_IC(5), dt=0.01, T=0.1, method='midpoint')

    def test_coupled_integration_contracts_both_components(self):
        k = 5
        params = SystemParams(variant=SystemVariant.II_C, coupling_1=5.0, coupling_2=5.0,
                              kernel_x=complete_kernel(True), kernel_y=complete_kernel(True))
        trajectory = integrate_IIC(random_state(k, 2, y_scale=0.5), params, dt=0.01, T=1.0)
        assert trajectory.norm_x[-1] < 0.01 * trajectory.norm_x[0]
        assert trajectory.norm_y[-1] < 0.01 * trajectory.norm_y[0]
        assert trajectory.coercivity == pytest.approx(np.full(trajectory.length, 5.0))


class TestEmergence:

    def test_first_crossing(self):
        trajectory = run_discrete(random_state(10, 2), flocking_params(10), [None], steps=100)
        times = detect_emergence(trajectory, None, 0.05)
        index = int(np.argmax(trajectory.norm_y <= 0.05))
        assert times.y_step == trajectory.steps[index]
        assert times.y_reached and not times.x_reached

    def test_geometric_decay_crosses_at_step_22(self):
        # k = 2, pesos completos, h = 0.05: factor |1 − 2h| = 0.9
        state = scaled_state(2, 1, 0.0, 0.5)
        trajectory = run_discrete(state, _complete_ID(2, h=0.05), [None], steps=30)
        np.testing.assert_allclose(trajectory.norm_y, 0.5 * 0.9 ** np.arange(31), rtol=1e-12)
        times = detect_emergence(trajectory, None, 0.05)
        assert times.y_step == 22
        assert times.y_time == pytest.approx(1.1)

    def test_unreached_threshold(self):
        trajectory = run_discrete(random_state(10, 2), flocking_params(10), [None], steps=1)
        assert detect_emergence(trajectory, None, 1e-9).y_step is None

    def test_thresholds_must_be_positive(self):
        trajectory = run_discrete(random_state(10, 2), flocking_params(10), [None], steps=1)
        with pytest.raises(DomainError):
            detect_emergence(trajectory, None, 0.0)
