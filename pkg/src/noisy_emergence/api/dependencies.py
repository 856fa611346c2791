# -*- coding: utf-8 -*-
"""
Dependencias de la API - Inicialización de servicios y repositorios.

Aquí se crean las instancias de servicios y adaptadores que usan la API y la CLI.
"""
from typing import Optional

from noisy_emergence.domain.ports.cdf_table_repository import CdfTableRepository, InMemoryCdfTableRepository
from noisy_emergence.domain.services.harness_service import HarnessService
from noisy_emergence.domain.services.noise_service import NoiseService
from noisy_emergence.infrastructure.config import settings
from noisy_emergence.infrastructure.config.scenario_loader import parse_scenario
from noisy_emergence.infrastructure.persistence.cdf_table_repository_csv import CdfTableRepositoryCSV
from noisy_emergence.infrastructure.persistence.result_exporter_files import ResultExporterFiles


def get_cdf_table_repository() -> CdfTableRepository:
    """
    Factory function para el almacén de tablas CDF.

    Returns:
        Almacén CSV en NE_CDF_CACHE_DIR, o en memoria si la variable está vacía
    """
    if settings.CDF_CACHE_DIR:
        return CdfTableRepositoryCSV(settings.CDF_CACHE_DIR)
    return InMemoryCdfTableRepository()


def get_noise_service() -> NoiseService:
    """
    Factory function para crear el servicio de ruido con sus dependencias.

    Returns:
        Instancia de NoiseService configurada con el almacén de tablas
    """
    return NoiseService(get_cdf_table_repository(), mc_samples=settings.CDF_MC_SAMPLES,
                        mc_seed=settings.CDF_MC_SEED)


def get_harness_service(max_workers: Optional[int] = None) -> HarnessService:
    """
    Factory function para crear el servicio del arnés con sus dependencias.

    Args:
        max_workers: Procesos para Monte Carlo (por defecto NE_MAX_WORKERS)

    Returns:
        Instancia de HarnessService con el exportador de ficheros y el cargador JSON
    """
    return HarnessService(
        get_noise_service(),
        exporter=ResultExporterFiles(),
        config_parser=parse_scenario,
        max_workers=settings.MAX_WORKERS if max_workers is None else max_workers,
    )
