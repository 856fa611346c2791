# -*- coding: utf-8 -*-
"""
Puerto (interfaz) para el almacén de tablas Monte Carlo de la CDF de ||H||.

Define las operaciones que el servicio de ruido necesita sin depender del formato.
"""
from abc import ABC, abstractmethod
from typing import Optional

from noisy_emergence.domain.models.noise import CdfTable


class CdfTableRepository(ABC):
    """
    Interfaz para guardar y recuperar tablas de CDF indexadas por el hash de la ley.
    """

    @abstractmethod
    def load(self, spec_hash: str, samples: int, seed: int) -> Optional[CdfTable]:
        """
        Recupera una tabla previamente calculada.

        Args:
            spec_hash: Hash de la NoiseSpec
            samples: Número de muestras con que se calculó
            seed: Semilla con que se calculó

        Returns:
            La tabla si existe, None si no
        """
        pass

    @abstractmethod
    def save(self, spec_hash: str, table: CdfTable) -> None:
        """
        Persiste una tabla.

        Args:
            spec_hash: Hash de la NoiseSpec
            table: Tabla a guardar
        """
        pass


class InMemoryCdfTableRepository(CdfTableRepository):
    """Almacén en memoria; es el que se usa cuando la caché en disco está desactivada."""

    def __init__(self):
        self._tables = {}

    def load(self, spec_hash: str, samples: int, seed: int) -> Optional[CdfTable]:
        return self._tables.get((spec_hash, samples, seed))

    def save(self, spec_hash: str, table: CdfTable) -> None:
        self._tables[(spec_hash, table.samples, table.seed)] = table
