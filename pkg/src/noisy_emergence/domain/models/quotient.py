# -*- coding: utf-8 -*-
"""
Entidades del espacio de agentes X y del cociente Ỹ = Yᵏ/Δ.

Los valores son matrices k × d inmutables (una fila por agente).
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from noisy_emergence.domain.errors import DomainError


class InnerProduct(str, Enum):
    """Producto interno fijado sobre el cociente."""

    # ½ΣΣ⟨u_i − u_j, v_i − v_j⟩
    PAIRWISE = "pairwise"
    # Producto euclídeo sobre el representante centrado
    EUCLIDEAN = "euclidean"


def _as_frozen_matrix(values) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.ndim == 1:
        array = array.reshape(-1, 1)
    if array.ndim != 2:
        raise DomainError(f"Se esperaba una matriz k × d, recibido un array de dimensión {array.ndim}")
    if array.shape[0] < 1 or array.shape[1] < 1:
        raise DomainError(f"La configuración debe tener k ≥ 1 y d ≥ 1, recibido {array.shape}")
    if not np.all(np.isfinite(array)):
        raise DomainError("Todas las coordenadas deben ser finitas")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class AgentConfiguration:
    """
    Configuración de k agentes, cada uno un punto de ℝᵈ.

    Representa tanto un elemento de X como el vector crudo ŷ = (y_1, …, y_k).
    """

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'values', _as_frozen_matrix(self.values))

    @property
    def k(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class QuotientVector:
    """
    Representante canónico (media por columna nula) de un elemento de Yᵏ/Δ.
    """

    values: np.ndarray

    def __post_init__(self):
        values = _as_frozen_matrix(self.values)
        scale = float(np.max(np.abs(values))) if values.size else 0.0
        tolerance = 1e-12 * values.shape[0] * scale
        column_sums = values.sum(axis=0)
        if np.any(np.abs(column_sums) > tolerance):
            raise DomainError(
                f"El representante no está centrado: sumas por columna {column_sums.tolist()}"
            )
        object.__setattr__(self, 'values', values)

    @property
    def k(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]
