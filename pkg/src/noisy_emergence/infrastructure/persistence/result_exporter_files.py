# -*- coding: utf-8 -*-
"""
Implementación en ficheros del exportador de resultados: CSV para trazas y
barridos, JSON determinista para resúmenes.

Los floats se escriben con repr para que dos ejecuciones iguales produzcan
ficheros idénticos byte a byte.
"""
import csv
import json
from pathlib import Path
from typing import Any, Dict, List, Sequence, TextIO

from noisy_emergence.domain.ports.result_exporter import ResultExporter


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(stream: TextIO, rows: List[Dict[str, Any]], columns: Sequence[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(list(columns))
    for row in rows:
        writer.writerow([_cell(row.get(column)) for column in columns])


def dumps(payload: Dict[str, Any]) -> str:
    """JSON con claves ordenadas; los no finitos deben llegar ya convertidos a cadena."""
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


class ResultExporterFiles(ResultExporter):
    """
    Implementación concreta del exportador usando el sistema de ficheros.
    """

    @staticmethod
    def _open(path: str):
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        return target.open("w", encoding="utf-8", newline="")

    def write_trace(self, path: str, rows: List[Dict[str, Any]], columns: Sequence[str]) -> None:
        with self._open(path) as f:
            write_csv(f, rows, columns)

    def write_summary(self, path: str, summary: Dict[str, Any]) -> None:
        with self._open(path) as f:
            f.write(dumps(summary))

    def write_sweep(self, path: str, rows: List[Dict[str, Any]], columns: Sequence[str]) -> None:
        with self._open(path) as f:
            write_csv(f, rows, columns)
