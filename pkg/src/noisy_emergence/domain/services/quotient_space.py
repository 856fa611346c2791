# -*- coding: utf-8 -*-
"""
Servicio del espacio cociente Ỹ = Yᵏ/Δ.

El representante canónico de una clase es la matriz centrada (media nula por
columna). Por defecto el producto interno es el de diferencias por pares,
½ΣΣ⟨u_i − u_j, v_i − v_j⟩, que sobre representantes centrados vale
k·Σ⟨u_i − ū, v_i − v̄⟩. La variante euclídea usa Σ⟨u_i, v_i⟩ directamente.

Las funciones `center_array`, `array_inner` y `array_norm` trabajan sobre
arrays crudos y son las que usan los bucles de simulación.
"""
from functools import lru_cache
from typing import Union

import numpy as np
from scipy.linalg import null_space

from noisy_emergence.domain.errors import DomainError
from noisy_emergence.domain.models.quotient import AgentConfiguration, InnerProduct, QuotientVector

ConfigurationLike = Union[AgentConfiguration, QuotientVector, np.ndarray]


def _raw(values: ConfigurationLike) -> np.ndarray:
    if isinstance(values, (AgentConfiguration, QuotientVector)):
        return values.values
    array = np.asarray(values, dtype=float)
    if array.ndim == 1:
        array = array.reshape(-1, 1)
    return array


def center_array(values: np.ndarray) -> np.ndarray:
    """
    Resta la media de los agentes a cada columna.

    Se hacen dos pasadas: la segunda elimina el residuo de redondeo cuando
    los valores tienen un desplazamiento común grande.
    """
    centered = values - values.mean(axis=0, keepdims=True)
    return centered - centered.mean(axis=0, keepdims=True)


def inner_scale(k: int, inner: InnerProduct = InnerProduct.PAIRWISE) -> float:
    """Factor que multiplica el producto euclídeo de representantes centrados."""
    return float(k) if InnerProduct(inner) is InnerProduct.PAIRWISE else 1.0


def array_inner(u: np.ndarray, v: np.ndarray, inner: InnerProduct = InnerProduct.PAIRWISE) -> float:
    cu = center_array(u)
    cv = center_array(v)
    return inner_scale(u.shape[0], inner) * float(np.sum(cu * cv))


def array_norm(values: np.ndarray, inner: InnerProduct = InnerProduct.PAIRWISE,
               centered: bool = False) -> float:
    """
    Norma del cociente de un array k × d.

    Args:
        values: Array k × d
        inner: Producto interno a usar
        centered: Si es True se asume que `values` ya es un representante centrado
    """
    c = values if centered else center_array(values)
    return float(np.sqrt(inner_scale(values.shape[0], inner)) * np.linalg.norm(c))


def plain_norm(values: np.ndarray) -> float:
    """Norma euclídea de X cuando X no se declara como cociente."""
    return float(np.linalg.norm(values))


def project_to_quotient(v: ConfigurationLike) -> QuotientVector:
    """
    Proyecta una configuración a su representante canónico en Δ⊥.

    Args:
        v: Configuración de agentes (k × d)

    Returns:
        QuotientVector con media nula por columna

    Raises:
        DomainError: Si hay coordenadas no finitas
    """
    raw = _raw(v)
    if not np.all(np.isfinite(raw)):
        raise DomainError("No se puede proyectar una configuración con coordenadas no finitas")
    return QuotientVector(center_array(raw))


def _check_shapes(u: np.ndarray, v: np.ndarray) -> None:
    if u.shape != v.shape:
        raise DomainError(f"Formas incompatibles para el producto interno: {u.shape} y {v.shape}")


def quotient_inner(u: ConfigurationLike, v: ConfigurationLike,
                   inner: InnerProduct = InnerProduct.PAIRWISE) -> float:
    """
    Producto interno del cociente.

    Raises:
        DomainError: Si k o d no coinciden
    """
    ru, rv = _raw(u), _raw(v)
    _check_shapes(ru, rv)
    return array_inner(ru, rv, inner)


def quotient_norm(v: ConfigurationLike, inner: InnerProduct = InnerProduct.PAIRWISE) -> float:
    """Norma inducida, sqrt(quotient_inner(v, v))."""
    return array_norm(_raw(v), inner)


@lru_cache(maxsize=64)
def _basis(k: int) -> np.ndarray:
    basis = null_space(np.ones((1, k)))
    basis.setflags(write=False)
    return basis


def quotient_basis(k: int) -> np.ndarray:
    """
    Base ortonormal (euclídea) de Δ⊥ ⊂ ℝᵏ, matriz k × (k − 1).

    Raises:
        DomainError: Si k < 2 (el cociente es trivial)
    """
    if k < 2:
        raise DomainError("El cociente es trivial para k < 2")
    return _basis(k)


def quotient_dimension(k: int, d: int, quotient: bool = True) -> int:
    """Dimensión intrínseca del espacio objetivo: (k − 1)·d en el cociente, k·d en otro caso."""
    return (k - 1) * d if quotient else k * d


def embed_intrinsic(z: np.ndarray, k: int, d: int,
                    inner: InnerProduct = InnerProduct.PAIRWISE) -> np.ndarray:
    """
    Lleva un vector z ∈ ℝ^{(k−1)d} a un representante centrado H con
    quotient_norm(H) = ||z||.
    """
    coords = np.asarray(z, dtype=float).reshape(k - 1, d)
    return quotient_basis(k) @ coords / np.sqrt(inner_scale(k, inner))
