# -*- coding: utf-8 -*-
"""
Implementación CSV del almacén de tablas Monte Carlo de la CDF de ||H||.

Cada tabla es un fichero `<hash>_n<muestras>_s<semilla>.csv` con las columnas
x, F_estimate, half_width.
"""
import csv
import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np

from noisy_emergence.domain.models.noise import CdfTable
from noisy_emergence.domain.ports.cdf_table_repository import CdfTableRepository

logger = logging.getLogger(__name__)

COLUMNS = ["x", "F_estimate", "half_width"]


class CdfTableRepositoryCSV(CdfTableRepository):
    """
    Implementación concreta del almacén de tablas usando ficheros CSV.
    """

    def __init__(self, directory: Union[str, Path]):
        self.directory = Path(directory)

    def _path(self, spec_hash: str, samples: int, seed: int) -> Path:
        return self.directory / f"{spec_hash}_n{samples}_s{seed}.csv"

    def load(self, spec_hash: str, samples: int, seed: int) -> Optional[CdfTable]:
        """
        Lee una tabla de disco.

        Returns:
            La tabla, o None si no existe o está dañada
        """
        path = self._path(spec_hash, samples, seed)
        if not path.exists():
            return None
        try:
            with path.open("r", encoding="utf-8", newline="") as f:
                reader = csv.DictReader(f)
                if reader.fieldnames != COLUMNS:
                    raise ValueError(f"columnas inesperadas {reader.fieldnames}")
                rows = [(float(row["x"]), float(row["F_estimate"]), float(row["half_width"])) for row in reader]
        except (OSError, ValueError, KeyError) as e:
            logger.warning("Tabla CDF %s ilegible, se recalculará: %s", path, e)
            return None
        if not rows:
            return None
        data = np.array(rows)
        return CdfTable(xs=data[:, 0], values=data[:, 1], half_width=float(data[0, 2]),
                        samples=samples, seed=seed)

    def save(self, spec_hash: str, table: CdfTable) -> None:
        """Escribe la tabla; un fallo de escritura solo se registra."""
        path = self._path(spec_hash, table.samples, table.seed)
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            with path.open("w", encoding="utf-8", newline="") as f:
                writer = csv.writer(f)
                writer.writerow(COLUMNS)
                for x, value in zip(table.xs, table.values):
                    writer.writerow([repr(float(x)), repr(float(value)), repr(float(table.half_width))])
            logger.info("Tabla CDF guardada en %s", path)
        except OSError as e:
            logger.warning("No se pudo guardar la tabla CDF en %s: %s", path, e)
