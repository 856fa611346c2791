# -*- coding: utf-8 -*-
"""
Errores del dominio.

Todos heredan de ValueError para que la capa de entrada los trate como
errores de validación (400 en la API, código 1 en la CLI).
"""
from typing import Optional


class DomainError(ValueError):
    """Entrada matemáticamente inválida (coordenadas no finitas, formas incompatibles, etc.)."""


class ConfigurationError(ValueError):
    """
    Error en la configuración de un escenario.

    Attributes:
        field_path: Ruta del campo con puntos (ej: 'noise.y.radius')
    """

    def __init__(self, field_path: str, message: str):
        self.field_path = field_path
        super().__init__(f"{field_path}: {message}")


class SimulationAborted(DomainError):
    """
    La simulación se detuvo por un estado no finito o una norma mayor que el umbral de explosión.

    Attributes:
        step: Índice del paso en el que se detectó el problema
        diagnostic: Descripción del problema
    """

    def __init__(self, step: int, diagnostic: str, time: Optional[float] = None):
        self.step = step
        self.time = time
        self.diagnostic = diagnostic
        super().__init__(f"Simulación abortada en el paso {step}: {diagnostic}")
