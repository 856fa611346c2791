# -*- coding: utf-8 -*-
"""Fixtures compartidas por las pruebas."""
from pathlib import Path

import pytest

from noisy_emergence.domain.services.harness_service import HarnessService
from noisy_emergence.domain.services.noise_service import NoiseService
from noisy_emergence.infrastructure.config import settings
from noisy_emergence.infrastructure.config.scenario_loader import parse_scenario
from noisy_emergence.infrastructure.persistence.result_exporter_files import ResultExporterFiles

SCENARIOS_DIR = Path(__file__).resolve().parents[1] / "data" / "escenarios"


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch):
    """Sin caché en disco y tablas Monte Carlo pequeñas."""
    monkeypatch.setattr(settings, "CDF_CACHE_DIR", "")
    monkeypatch.setattr(settings, "CDF_MC_SAMPLES", 20_000)
    monkeypatch.setattr(settings, "MAX_WORKERS", 1)


@pytest.fixture
def scenarios_dir() -> Path:
    return SCENARIOS_DIR


@pytest.fixture
def noise_service() -> NoiseService:
    return NoiseService(mc_samples=20_000, mc_seed=7)


@pytest.fixture
def harness_service(noise_service) -> HarnessService:
    return HarnessService(noise_service, exporter=ResultExporterFiles(), config_parser=parse_scenario)

