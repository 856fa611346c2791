# -*- coding: utf-8 -*-
"""
Puerto (interfaz) para exportar resultados del arnés (trazas, resúmenes, barridos).
"""
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Sequence


class ResultExporter(ABC):
    """
    Interfaz para escribir los artefactos que produce el arnés.
    """

    @abstractmethod
    def write_trace(self, path: str, rows: List[Dict[str, Any]], columns: Sequence[str]) -> None:
        """
        Escribe una traza de simulación como CSV.

        Args:
            path: Ruta de salida
            rows: Una fila por instante muestreado
            columns: Orden de las columnas
        """
        pass

    @abstractmethod
    def write_summary(self, path: str, summary: Dict[str, Any]) -> None:
        """
        Escribe un resumen como JSON determinista.

        Args:
            path: Ruta de salida
            summary: Contenido serializable
        """
        pass

    @abstractmethod
    def write_sweep(self, path: str, rows: List[Dict[str, Any]], columns: Sequence[str]) -> None:
        """
        Escribe las filas de un barrido de parámetros como CSV.

        Args:
            path: Ruta de salida
            rows: Una fila por punto de la malla (puede estar vacía)
            columns: Orden de las columnas
        """
        pass
