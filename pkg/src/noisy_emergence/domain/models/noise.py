# -*- coding: utf-8 -*-
"""
Entidades de ruido: leyes discretas, procesos en tiempo continuo y tablas de
la función de distribución de la norma.
"""
import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from noisy_emergence.domain.errors import DomainError
from noisy_emergence.domain.models.quotient import InnerProduct


class NoiseKind(str, Enum):
    ZERO = "zero"
    BALL = "ball"
    CUBE = "cube"
    GAUSSIAN = "gaussian"


class CdfMethod(str, Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class NoiseSpec:
    """
    Ley de un término de ruido H con valores en el espacio objetivo.

    Sobre un cociente la muestra se toma en ℝ^m con m = (k − 1)·d y se
    incrusta en Δ⊥ conservando la norma, de modo que F es exactamente la
    de la ley base en dimensión m.

    Attributes:
        kind: Ley base
        k, d: Forma del espacio objetivo
        quotient: Si el objetivo es un cociente (centrado)
        inner: Producto interno del cociente
        radius: Radio de la bola o arista del cubo
        sigma: Desviación típica por coordenada de la gaussiana
    """

    kind: NoiseKind
    k: int
    d: int
    quotient: bool = True
    inner: InnerProduct = InnerProduct.PAIRWISE
    radius: float = 0.0
    sigma: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'kind', NoiseKind(self.kind))
        object.__setattr__(self, 'inner', InnerProduct(self.inner))
        if self.k < 1 or self.d < 1:
            raise DomainError(f"Forma de ruido inválida: k={self.k}, d={self.d}")
        if self.quotient and self.k < 2:
            raise DomainError("El ruido sobre un cociente necesita k ≥ 2")
        if self.kind in (NoiseKind.BALL, NoiseKind.CUBE) and not self.radius > 0:
            raise DomainError(f"El radio/arista debe ser positivo, recibido {self.radius}")
        if self.kind is NoiseKind.GAUSSIAN and not self.sigma > 0:
            raise DomainError(f"σ debe ser positiva, recibido {self.sigma}")

    @property
    def dimension(self) -> int:
        """Dimensión intrínseca m de la muestra."""
        return (self.k - 1) * self.d if self.quotient else self.k * self.d

    @property
    def is_zero(self) -> bool:
        return self.kind is NoiseKind.ZERO

    def spec_hash(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()[:16]

    def to_dict(self) -> dict:
        data = {"kind": self.kind.value, "k": self.k, "d": self.d,
                "quotient": self.quotient, "dimension": self.dimension}
        if self.kind in (NoiseKind.BALL, NoiseKind.CUBE):
            data["radius"] = self.radius
        if self.kind is NoiseKind.GAUSSIAN:
            data["sigma"] = self.sigma
        if self.quotient:
            data["inner"] = self.inner.value
        return data


@dataclass(frozen=True)
class ClippedNoiseSpec:
    """
    Ruido recortado: cada muestra con ||H|| > ℋ·||estado|| se reescala a la frontera.

    Solo se usa para comprobar envolventes deterministas; las cotas de
    probabilidad nunca se calculan con ruido recortado.
    """

    base: NoiseSpec
    threshold: float

    def __post_init__(self):
        if not self.threshold >= 0:
            raise DomainError(f"El umbral de recorte debe ser ≥ 0, recibido {self.threshold}")

    def cap(self, state_norm: float) -> float:
        return self.threshold * state_norm


@dataclass(frozen=True)
class PathNoiseSpec:
    """
    Proceso en tiempo continuo ε·H(t).

    Con `refresh` > 0 el proceso es constante a trozos con valores iid de la
    ley base renovados cada Δ = refresh. Con `ou_rate` > 0 es un proceso de
    Ornstein–Uhlenbeck estacionario con marginales N(0, σ²) (base gaussiana).

    Attributes:
        base: Ley de los valores
        refresh: Intervalo Δ de renovación (proceso congelado a trozos)
        ou_rate: Tasa de relajación θ (opción suavizada)
        amplitude: Factor ε que multiplica H(t)
        mc_paths: Trayectorias de Monte Carlo para la cota de la opción OU
        grid_step: Paso de la malla temporal de la opción OU
    """

    base: NoiseSpec
    refresh: float = 0.0
    ou_rate: float = 0.0
    amplitude: float = 1.0
    mc_paths: int = 10_000
    grid_step: float = 0.01

    def __post_init__(self):
        if not (self.refresh > 0 or self.ou_rate > 0):
            raise DomainError("Un proceso de ruido necesita refresh > 0 o ou_rate > 0")
        if self.refresh > 0 and self.ou_rate > 0:
            raise DomainError("refresh y ou_rate son excluyentes")
        if self.is_ou and self.base.kind not in (NoiseKind.GAUSSIAN, NoiseKind.ZERO):
            raise DomainError("La opción Ornstein–Uhlenbeck requiere una ley base gaussiana")
        if not self.amplitude > 0:
            raise DomainError(f"La amplitud ε debe ser positiva, recibido {self.amplitude}")
        if self.mc_paths < 1 or not self.grid_step > 0:
            raise DomainError("mc_paths y grid_step deben ser positivos")

    @property
    def is_ou(self) -> bool:
        return self.ou_rate > 0

    @property
    def is_zero(self) -> bool:
        return self.base.is_zero

    def to_dict(self) -> dict:
        data = {"base": self.base.to_dict(), "amplitude": self.amplitude}
        if self.is_ou:
            data.update({"ou_rate": self.ou_rate, "mc_paths": self.mc_paths, "grid_step": self.grid_step})
        else:
            data["refresh"] = self.refresh
        return data


@dataclass(frozen=True, eq=False)
class CdfTable:
    """
    Tabla de Monte Carlo de F(x) = P(||H|| ≤ x).

    Attributes:
        xs: Puntos de evaluación crecientes
        values: Estimaciones de F en cada punto
        half_width: Semiancho de la banda de confianza (DKW, 95 %)
        samples: Número de muestras
        seed: Semilla usada
    """

    xs: np.ndarray
    values: np.ndarray
    half_width: float
    samples: int
    seed: int

    def evaluate(self, x: float) -> float:
        if x < self.xs[0]:
            return 0.0
        return float(np.interp(x, self.xs, self.values, right=1.0))


@dataclass(frozen=True)
class NormCdf:
    """F evaluada para una ley concreta, con el método y su incertidumbre."""

    spec: NoiseSpec
    method: CdfMethod
    x: float
    value: float
    half_width: float = 0.0
    samples: Optional[int] = None
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        data = {"method": self.method.value, "x": self.x, "value": self.value,
                "half_width": self.half_width}
        if self.samples is not None:
            data.update({"samples": self.samples, "seed": self.seed})
        return data


@dataclass(frozen=True, eq=False)
class NoiseDraw:
    """Una muestra de ruido ya incrustada, con su norma antes del recorte."""

    value: np.ndarray
    raw_norm: float
    clipped: bool = False
