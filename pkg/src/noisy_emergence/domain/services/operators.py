# -*- coding: utf-8 -*-
"""
Servicio de operadores de acoplamiento.

Construye A_x, L_x = D_x − A_x y S = I − hL a partir de las posiciones de los
agentes, y evalúa sobre Δ⊥ las dos cantidades espectrales que usan las
hipótesis de contracción y coercividad:

- norma de operador de S restringida al cociente,
- coercividad (valor de Fiedler) de L.

Las matrices k × k actúan por bloques sobre arrays k × d, así que ambas
cantidades son independientes de d y del producto interno elegido.
"""
import logging
from typing import Optional

import numpy as np
from scipy.linalg import eigh
from scipy.sparse.linalg import lobpcg

from noisy_emergence.domain.models.coupling import (
    Coercivity,
    CouplingMatrix,
    HypothesisCheck,
    HypothesisReport,
    KernelSpec,
)
from noisy_emergence.domain.models.quotient import AgentConfiguration
from noisy_emergence.domain.models.system import SystemParams, SystemState, SystemVariant
from noisy_emergence.domain.services.quotient_space import array_norm, plain_norm, quotient_basis

logger = logging.getLogger(__name__)

# Por encima de este tamaño se usa LOBPCG en lugar de la descomposición densa
DENSE_EIGEN_LIMIT = 64
EIGEN_TOLERANCE = 1e-9


def _is_symmetric(values: np.ndarray) -> bool:
    scale = max(1.0, float(np.max(np.abs(values)))) if values.size else 1.0
    return bool(np.allclose(values, values.T, rtol=0.0, atol=1e-12 * scale))


def adjacency_array(positions: np.ndarray, kernel: KernelSpec) -> np.ndarray:
    """a_ij = kernel(||x_i − x_j||) con diagonal nula."""
    diff = positions[:, None, :] - positions[None, :, :]
    distances = np.sqrt(np.sum(diff * diff, axis=-1))
    values = np.array(kernel(distances), dtype=float)
    np.fill_diagonal(values, 0.0)
    return values


def laplacian_array(adjacency_values: np.ndarray) -> np.ndarray:
    return np.diag(adjacency_values.sum(axis=1)) - adjacency_values


def adjacency(positions, kernel: KernelSpec) -> CouplingMatrix:
    """
    Matriz de adyacencia de un núcleo de distancias.

    Args:
        positions: AgentConfiguration o array k × d
        kernel: Núcleo de interacción

    Returns:
        CouplingMatrix simétrica, no negativa, con diagonal nula
    """
    raw = positions.values if isinstance(positions, AgentConfiguration) else np.asarray(positions, dtype=float)
    if raw.ndim == 1:
        raw = raw.reshape(-1, 1)
    return CouplingMatrix(adjacency_array(raw, kernel), symmetric=True, kernel=kernel)


def laplacian(A: CouplingMatrix) -> CouplingMatrix:
    """L = D − A, con D la matriz diagonal de grados."""
    if np.any(A.values < 0):
        logger.warning("Adyacencia con pesos negativos: el laplaciano puede no ser semidefinido")
    symmetric = _is_symmetric(A.values)
    if not symmetric:
        logger.warning("Adyacencia asimétrica recibida (k=%d); se marca en el resultado", A.k)
    return CouplingMatrix(laplacian_array(A.values), symmetric=symmetric,
                          kernel=A.kernel, is_laplacian=True)


def s_operator(L: CouplingMatrix, h: float) -> CouplingMatrix:
    """S = I − hL."""
    if h < 0:
        raise ValueError(f"El paso h debe ser ≥ 0, recibido {h}")
    values = np.eye(L.k) - h * L.values
    return CouplingMatrix(values, symmetric=L.symmetric, kernel=L.kernel)


def _restricted(values: np.ndarray) -> np.ndarray:
    Q = quotient_basis(values.shape[0])
    return Q.T @ values @ Q


def _extreme_eigenvalues_lobpcg(values: np.ndarray) -> np.ndarray:
    """Autovalores extremos de una matriz simétrica sobre Δ⊥ (restricción a los unos)."""
    k = values.shape[0]
    rng = np.random.default_rng(0)
    constraint = np.ones((k, 1)) / np.sqrt(k)
    start = rng.standard_normal((k, 1))
    smallest, _ = lobpcg(values, start, Y=constraint, largest=False, tol=EIGEN_TOLERANCE, maxiter=500)
    largest, _ = lobpcg(values, start, Y=constraint, largest=True, tol=EIGEN_TOLERANCE, maxiter=500)
    return np.array([smallest[0], largest[0]])


def operator_norm_array(values: np.ndarray, quotient: bool = True) -> float:
    """
    sup ||Sy||/||y|| sobre Δ⊥ (o sobre ℝᵏ si `quotient` es False).

    Supone que S conserva la diagonal (S·1 ∈ span(1)), como I − hL.
    """
    k = values.shape[0]
    if not quotient:
        return float(np.linalg.norm(values, ord=2))
    if _is_symmetric(values):
        if k > DENSE_EIGEN_LIMIT:
            return float(np.max(np.abs(_extreme_eigenvalues_lobpcg(values))))
        eigenvalues = eigh(_restricted(values), eigvals_only=True)
        return float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    return float(np.linalg.norm(_restricted(values), ord=2))


def coercivity_array(values: np.ndarray) -> Coercivity:
    symmetrized = not _is_symmetric(values)
    if symmetrized:
        values = 0.5 * (values + values.T)
    if values.shape[0] > DENSE_EIGEN_LIMIT:
        return Coercivity(float(_extreme_eigenvalues_lobpcg(values)[0]), symmetrized)
    eigenvalues = eigh(_restricted(values), eigvals_only=True)
    return Coercivity(float(eigenvalues[0]), symmetrized)


def operator_norm_on_quotient(S: CouplingMatrix) -> float:
    """
    Norma de operador de S sobre Ỹ.

    Para S simétrica es el mayor |λ| entre los autovectores ortogonales a (1, …, 1).
    """
    return operator_norm_array(S.values, quotient=True)


def coercivity(L: CouplingMatrix) -> Coercivity:
    """
    Mínimo cociente de Rayleigh ⟨Ly, y⟩/||y||² sobre Δ⊥ (valor de Fiedler).

    Si L no es simétrica se usa su parte simétrica y se marca en el resultado.
    """
    result = coercivity_array(L.values)
    if result.symmetrized:
        logger.warning("Coercividad calculada con la parte simétrica de un operador asimétrico")
    return result


def _state_norm(values: np.ndarray, params: SystemParams, is_x: bool) -> float:
    if is_x and not params.x_is_quotient:
        return plain_norm(values)
    return array_norm(values, params.inner)


def verify_operator_hypotheses(state: SystemState, params: SystemParams,
                               system_tag: Optional[str] = None,
                               tolerance: float = EIGEN_TOLERANCE) -> HypothesisReport:
    """
    Evalúa en el estado dado las cotas de contracción (discretas) o de
    coercividad (continuas) que los teoremas asumen.

    Args:
        state: Estado (x, y) en el que se evalúan los operadores
        params: Parámetros del sistema
        system_tag: Variante; por defecto la de `params`
        tolerance: Tolerancia absoluta de las comparaciones

    Returns:
        HypothesisReport con una comprobación por desigualdad
    """
    variant = SystemVariant(system_tag) if system_tag is not None else params.variant
    x, y = np.asarray(state.x, dtype=float), np.asarray(state.y, dtype=float)
    norm_x = _state_norm(x, params, is_x=True)
    norm_y = _state_norm(y, params, is_x=False)
    report = HypothesisReport(system_tag=variant.value)

    if variant is SystemVariant.I_D:
        L = laplacian_array(adjacency_array(x, params.kernel))
        lhs = operator_norm_array(np.eye(len(L)) - params.h * L)
        rhs = 1.0 - params.h * params.coupling / (1.0 + norm_x) ** params.beta
        report.checks.append(HypothesisCheck.evaluate("contraction_S", lhs, '<=', rhs, tolerance))
    elif variant is SystemVariant.II_D:
        L1 = laplacian_array(adjacency_array(y, params.kernel_y))
        lhs1 = operator_norm_array(np.eye(len(L1)) - params.h_1 * L1, quotient=params.x_is_quotient)
        rhs1 = 1.0 - params.h_1 * params.coupling_1 / (1.0 + norm_y) ** params.beta_1
        report.checks.append(HypothesisCheck.evaluate("contraction_S1", lhs1, '<=', rhs1, tolerance))
        L2 = laplacian_array(adjacency_array(x, params.kernel_x))
        lhs2 = operator_norm_array(np.eye(len(L2)) - params.h_2 * L2)
        rhs2 = 1.0 - params.h_2 * params.coupling_2 / (1.0 + norm_x) ** params.beta_2
        report.checks.append(HypothesisCheck.evaluate("contraction_S2", lhs2, '<=', rhs2, tolerance))
    elif variant is SystemVariant.I_C:
        phi = coercivity_array(laplacian_array(adjacency_array(x, params.kernel)))
        rhs = params.coupling / (1.0 + norm_x ** 2) ** params.beta
        report.checks.append(HypothesisCheck.evaluate("coercivity_phi", phi.value, '>=', rhs, tolerance))
    else:
        xi = coercivity_array(laplacian_array(adjacency_array(x, params.kernel_x)))
        rhs_xi = params.coupling_1 / (1.0 + norm_x ** 2) ** params.beta_1
        report.checks.append(HypothesisCheck.evaluate("coercivity_xi", xi.value, '>=', rhs_xi, tolerance))
        eta = coercivity_array(laplacian_array(adjacency_array(y, params.kernel_y)))
        rhs_eta = params.coupling_2 / (1.0 + norm_y ** 2) ** params.beta_2
        report.checks.append(HypothesisCheck.evaluate("coercivity_eta", eta.value, '>=', rhs_eta, tolerance))

    if not report.passed:
        logger.info("Hipótesis de operador no satisfechas en %s (holgura mínima %.3e)",
                    variant.value, report.worst_slack)
    return report
