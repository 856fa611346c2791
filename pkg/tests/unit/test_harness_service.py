# -*- coding: utf-8 -*-
import dataclasses

import numpy as np
import pytest

from noisy_emergence.domain.errors import ConfigurationError, DomainError
from noisy_emergence.domain.models.scenario import Verdict
from noisy_emergence.domain.models.system import SystemVariant
from noisy_emergence.domain.models.theory import TheoremTag
from noisy_emergence.domain.services.harness_service import (
    SWEEP_COLUMNS,
    set_path,
    trace_columns,
    trace_rows,
    wilson_interval,
)
from noisy_emergence.domain.services.theory import iteration_count
from noisy_emergence.infrastructure.config.scenario_loader import load_json, parse_scenario


def _build(harness_service, raw):
    return harness_service.build_scenario(parse_scenario(raw))


class TestHelpers:

    def test_wilson_without_successes(self):
        z = 1.959963984540054
        lo, hi = wilson_interval(0, 10)
        assert lo == 0.0
        assert hi == pytest.approx(z * z / (10 + z * z))

    def test_wilson_is_symmetric_at_one_half(self):
        lo, hi = wilson_interval(5, 10)
        assert lo + hi == pytest.approx(1.0)

    def test_wilson_with_every_success_reaches_one(self):
        assert wilson_interval(37, 37)[1] == 1.0

    def test_wilson_rejects_empty_or_inconsistent_counts(self):
        with pytest.raises(DomainError):
            wilson_interval(0, 0)
        with pytest.raises(DomainError):
            wilson_interval(11, 10)

    def test_set_path_copies_and_creates_intermediates(self):
        raw = {"noise": {"y": {"radius": 0.01}}}
        updated = set_path(raw, "noise.y.radius", 0.1)
        assert updated["noise"]["y"]["radius"] == 0.1
        assert raw["noise"]["y"]["radius"] == 0.01
        assert set_path(raw, "targets.nu", 0.2)["targets"] == {"nu": 0.2}

    def test_trace_columns_follow_the_variant(self):
        assert "phi" in trace_columns(SystemVariant.I_D)
        assert trace_columns(SystemVariant.II_C)[-3:] == ["noise_norm_1", "noise_norm_2", "clipped_flag"]


class TestBuildScenario:

    def test_flocking_preset_is_certified(self, harness_service):
        scenario = _build(harness_service, {"preset": "flocking-2d"})
        assert scenario.certified
        assert scenario.theorem is TheoremTag.THM1
        assert scenario.bound.probability == pytest.approx(1.0)
        assert scenario.steps == 4 * iteration_count(scenario.constants.T0)
        assert scenario.noise_specs["y"].radius == 0.01

    def test_language_preset_uses_both_sources(self, harness_service):
        scenario = _build(harness_service, {"preset": "language"})
        assert scenario.certified
        assert scenario.theorem is TheoremTag.THM2
        assert len(scenario.source_horizons) == 2

    def test_missing_velocity_target(self, harness_service):
        config = dataclasses.replace(parse_scenario({"preset": "flocking-2d"}), nu=None)
        with pytest.raises(ConfigurationError) as excinfo:
            harness_service.build_scenario(config)
        assert excinfo.value.field_path == "targets.nu"

    def test_rk4_only_without_noise(self, harness_service):
        with pytest.raises(ConfigurationError) as excinfo:
            _build(harness_service, {"preset": "flocking-continuous", "method": "rk4"})
        assert excinfo.value.field_path == "method"

    def test_zero_initial_velocity_is_rejected(self, harness_service):
        with pytest.raises(ConfigurationError) as excinfo:
            _build(harness_service, {"preset": "flocking-2d", "initial": {"y_scale": 0.0}})
        assert excinfo.value.field_path == "initial"

    def test_strong_coupling_is_built_but_not_certified(self, harness_service):
        scenario = _build(harness_service, {"preset": "flocking-2d", "params": {"coupling": 1000.0}})
        assert not scenario.certified
        assert scenario.notes


class TestTrials:

    def test_trials_are_reproducible(self, harness_service):
        scenario = _build(harness_service, {"preset": "flocking-2d"})
        first, trajectory = harness_service.simulate(scenario, 2)
        second, again = harness_service.simulate(scenario, 2)
        assert first == second
        np.testing.assert_array_equal(trajectory.norm_y, again.norm_y)
        _, other = harness_service.simulate(scenario, 3)
        assert not np.array_equal(trajectory.norm_y, other.norm_y)

    def test_trace_rows_match_the_columns(self, harness_service):
        scenario = _build(harness_service, {"preset": "flocking-2d"})
        _, trajectory = harness_service.simulate(scenario)
        rows = trace_rows(trajectory)
        assert len(rows) == trajectory.length
        assert list(rows[0]) == trace_columns(scenario.config)

    def test_small_monte_carlo_respects_the_bound(self, harness_service):
        scenario = _build(harness_service, {"preset": "flocking-2d"})
        summary = harness_service.monte_carlo(scenario, trials=20)
        assert summary.successes == 20
        assert summary.verdict is Verdict.RESPECTED
        assert summary.failures == 0
        assert summary.envelope_violations == 0
        assert summary.metadata["seed"] == 20240101

    def test_monte_carlo_needs_trials(self, harness_service):
        scenario = _build(harness_service, {"preset": "flocking-2d"})
        with pytest.raises(ConfigurationError):
            harness_service.monte_carlo(scenario, trials=0)

    def test_clipped_noise_only_checks_envelopes(self, harness_service, scenarios_dir):
        raw = load_json(scenarios_dir / "flocking_2d_recortado.json")
        scenario = _build(harness_service, raw)
        summary = harness_service.monte_carlo(scenario, trials=10)
        assert summary.verdict is Verdict.INAPPLICABLE
        assert summary.envelope_violations == 0
        assert any("recortado" in reason for reason in summary.reasons)

    def test_process_pool_matches_sequential_run(self, harness_service):
        scenario = _build(harness_service, {"preset": "flocking-2d"})
        sequential = harness_service.monte_carlo(scenario, trials=8, workers=1)
        pooled = harness_service.monte_carlo(scenario, trials=8, workers=2)
        assert pooled.to_dict() == sequential.to_dict()


class TestSweep:

    def test_empty_grid_gives_only_the_header(self, harness_service):
        rows, columns = harness_service.sweep({"preset": "flocking-2d"}, {})
        assert rows == [] and columns == SWEEP_COLUMNS
        rows, columns = harness_service.sweep({"preset": "flocking-2d"}, {"targets.nu": []})
        assert rows == [] and columns == ["targets.nu"] + SWEEP_COLUMNS

    def test_invalid_point_is_reported_in_its_row(self, harness_service):
        rows, _ = harness_service.sweep({"preset": "flocking-2d"}, {"k": [1, 10]}, trials=3)
        assert rows[0]["error"].startswith("k:")
        assert rows[0]["verdict"] == ""
        assert rows[1]["error"] == ""

    def test_horizon_grows_as_the_target_shrinks(self, harness_service):
        rows, _ = harness_service.sweep({"preset": "flocking-2d"}, {"targets.nu": [0.2, 0.1, 0.05]}, trials=3)
        horizons = [row["T"] for row in rows]
        assert horizons == sorted(horizons)
        assert horizons[0] < horizons[-1]
        assert all(row["verdict"] == "respected" for row in rows)
