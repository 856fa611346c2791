# -*- coding: utf-8 -*-
"""
Entidades de acoplamiento: núcleos de interacción, matrices k × k e informes
de hipótesis sobre operadores.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from noisy_emergence.domain.errors import DomainError


class KernelKind(str, Enum):
    # K/(1 + r)^β, forma de los sistemas discretos
    CUCKER_SMALE = "cucker_smale"
    # K/(1 + r²)^β, forma de las hipótesis continuas
    CUCKER_SMALE_SQUARED = "cucker_smale_squared"
    # Tabla (r, valor) de una función acotada no creciente, interpolada linealmente
    TABLE = "table"


@dataclass(frozen=True)
class KernelSpec:
    """
    Núcleo de interacción en función de la distancia entre agentes.

    Attributes:
        kind: Tipo de núcleo
        scale: Escala K > 0
        exponent: Exponente β ≥ 0 (ignorado por las tablas)
        table: Pares (distancia, valor) para KernelKind.TABLE
    """

    kind: KernelKind = KernelKind.CUCKER_SMALE
    scale: float = 1.0
    exponent: float = 0.0
    table: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'kind', KernelKind(self.kind))
        if not self.scale > 0:
            raise DomainError(f"La escala del núcleo debe ser positiva, recibido {self.scale}")
        if not self.exponent >= 0:
            raise DomainError(f"El exponente del núcleo debe ser ≥ 0, recibido {self.exponent}")
        if self.kind is KernelKind.TABLE:
            table = tuple((float(r), float(value)) for r, value in self.table)
            if len(table) < 1:
                raise DomainError("Un núcleo tabulado necesita al menos un punto")
            radii = np.array([r for r, _ in table])
            values = np.array([value for _, value in table])
            if np.any(np.diff(radii) <= 0) or radii[0] < 0:
                raise DomainError("Las distancias de la tabla deben ser no negativas y crecientes")
            if np.any(values < 0):
                raise DomainError("Los valores del núcleo deben ser no negativos")
            if np.any(np.diff(values) > 0):
                raise DomainError("El núcleo tabulado debe ser no creciente")
            object.__setattr__(self, 'table', table)

    def __call__(self, distance) -> np.ndarray:
        r = np.asarray(distance, dtype=float)
        if self.kind is KernelKind.CUCKER_SMALE:
            return self.scale / (1.0 + r) ** self.exponent
        if self.kind is KernelKind.CUCKER_SMALE_SQUARED:
            return self.scale / (1.0 + r * r) ** self.exponent
        radii = np.array([p[0] for p in self.table])
        values = np.array([p[1] for p in self.table])
        return self.scale * np.interp(r, radii, values)

    def to_dict(self) -> dict:
        data = {"kind": self.kind.value, "scale": self.scale, "exponent": self.exponent}
        if self.table:
            data["table"] = [list(p) for p in self.table]
        return data


@dataclass(frozen=True, eq=False)
class CouplingMatrix:
    """
    Matriz real k × k (adyacencia, laplaciano u operador S = I − hL).

    Attributes:
        values: Entradas de la matriz
        symmetric: Si la matriz es simétrica (tolerancia 1e-12 relativa)
        kernel: Núcleo usado para construirla, si procede
        is_laplacian: Si se construyó como laplaciano (filas de suma nula)
    """

    values: np.ndarray
    symmetric: bool = True
    kernel: Optional[KernelSpec] = None
    is_laplacian: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise DomainError(f"Se esperaba una matriz cuadrada, recibido {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DomainError("La matriz de acoplamiento tiene entradas no finitas")
        if self.is_laplacian:
            row_sums = np.abs(values.sum(axis=1))
            if np.any(row_sums > 1e-10 * max(1.0, float(np.max(np.abs(values))))):
                raise DomainError("Un laplaciano debe tener filas de suma nula")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @property
    def k(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class Coercivity:
    """Mínimo cociente de Rayleigh sobre Δ⊥; `symmetrized` indica que se usó la parte simétrica."""

    value: float
    symmetrized: bool = False

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class HypothesisCheck:
    """
    Una desigualdad evaluada en ambos lados.

    La holgura es rhs − lhs para '<=' y lhs − rhs para '>='; no negativa si se cumple.
    """

    name: str
    lhs: float
    relation: str
    rhs: float
    passed: bool
    slack: float

    @classmethod
    def evaluate(cls, name: str, lhs: float, relation: str, rhs: float,
                 tolerance: float = 0.0) -> 'HypothesisCheck':
        if relation in ('<=', '<'):
            slack = rhs - lhs
        elif relation in ('>=', '>'):
            slack = lhs - rhs
        else:
            raise DomainError(f"Relación desconocida: {relation}")
        strict = relation in ('<', '>')
        passed = bool(slack > 0) if strict else bool(slack >= -tolerance)
        return cls(name=name, lhs=float(lhs), relation=relation, rhs=float(rhs),
                   passed=passed, slack=float(slack))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "relation": self.relation,
            "rhs": self.rhs,
            "passed": self.passed,
            "slack": self.slack,
        }


@dataclass
class HypothesisReport:
    """Resultado de verificar las hipótesis de operador (contracción, coercividad y cota de J) en un estado."""

    system_tag: str
    checks: List[HypothesisCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def worst_slack(self) -> float:
        return min((check.slack for check in self.checks), default=float('inf'))

    def to_dict(self) -> dict:
        return {
            "system": self.system_tag,
            "passed": self.passed,
            "checks": [check.to_dict() for check in self.checks],
        }
