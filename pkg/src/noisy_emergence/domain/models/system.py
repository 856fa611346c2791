# -*- coding: utf-8 -*-
"""
Entidades de los cuatro sistemas dinámicos I(D), II(D), I(C), II(C).
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from noisy_emergence.domain.errors import DomainError
from noisy_emergence.domain.models.coupling import KernelSpec
from noisy_emergence.domain.models.quotient import InnerProduct


class SystemVariant(str, Enum):
    I_D = "I(D)"
    II_D = "II(D)"
    I_C = "I(C)"
    II_C = "II(C)"

    @property
    def is_discrete(self) -> bool:
        return self in (SystemVariant.I_D, SystemVariant.II_D)

    @property
    def is_coupled(self) -> bool:
        """Sistemas II: x e y se acoplan simétricamente."""
        return self in (SystemVariant.II_D, SystemVariant.II_C)


class JOperator:
    """
    Operador J: X × Ỹ → X con constantes declaradas de la cota
    ||J(x, y)|| ≤ C(1 + ||x||)^γ ||y||^δ (o la forma con ||x||² en continuo).
    """

    name = "abstract"

    def __init__(self, C: float = 1.0, gamma: float = 0.0, delta: float = 1.0):
        if not C > 0:
            raise DomainError(f"C debe ser positiva, recibido {C}")
        if not 0 <= gamma < 1:
            raise DomainError(f"γ debe cumplir 0 ≤ γ < 1, recibido {gamma}")
        if not delta > 0:
            raise DomainError(f"δ debe ser positiva, recibido {delta}")
        self.C = float(C)
        self.gamma = float(gamma)
        self.delta = float(delta)

    def __call__(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        return {"kind": self.name, "C": self.C, "gamma": self.gamma, "delta": self.delta}


class IdentityJ(JOperator):
    """J(x, y) = y, la elección del modelo de bandadas (C = 1, γ = 0, δ = 1)."""

    name = "identity"

    def __call__(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.array(y, dtype=float)


class ScaledJ(JOperator):
    """J(x, y) = factor·y con constantes declaradas por el usuario."""

    name = "scaled"

    def __init__(self, factor: float, C: float = 1.0, gamma: float = 0.0, delta: float = 1.0):
        super().__init__(C=C, gamma=gamma, delta=delta)
        self.factor = float(factor)

    def __call__(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.factor * np.array(y, dtype=float)

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["factor"] = self.factor
        return data


@dataclass(frozen=True)
class SystemParams:
    """
    Parámetros de un sistema.

    `coupling` es G en I(D) y K en I(C). En los sistemas II, `coupling_1`,
    `beta_1` (y los índices 2) siguen la numeración de cada variante:
    en II(D) G₁, β₁ acompañan a S₁(y), que actúa sobre x; en II(C) K₁, β₁
    acotan ξ_x, la coercividad de L_{2x} que actúa sobre y.

    `kernel` construye L_x en los sistemas I. En los sistemas II,
    `kernel_x` (f) construye A_x → L_{2x} y `kernel_y` (g) construye B_y → L_{1y}.
    """

    variant: SystemVariant
    # Sistemas I
    coupling: float = 1.0
    beta: float = 0.0
    h: float = 0.1
    kernel: Optional[KernelSpec] = None
    j_operator: JOperator = field(default_factory=IdentityJ)
    # Sistemas II
    coupling_1: float = 1.0
    coupling_2: float = 1.0
    beta_1: float = 0.0
    beta_2: float = 0.0
    h_1: float = 0.1
    h_2: float = 0.1
    kernel_x: Optional[KernelSpec] = None
    kernel_y: Optional[KernelSpec] = None
    # Espacios
    inner: InnerProduct = InnerProduct.PAIRWISE
    x_is_quotient: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'variant', SystemVariant(self.variant))
        object.__setattr__(self, 'inner', InnerProduct(self.inner))
        if self.variant.is_coupled:
            for name in ('coupling_1', 'coupling_2'):
                if not getattr(self, name) > 0:
                    raise DomainError(f"{name} debe ser positivo")
            for name in ('beta_1', 'beta_2'):
                if not getattr(self, name) >= 0:
                    raise DomainError(f"{name} debe ser ≥ 0")
            if self.variant.is_discrete:
                for name in ('h_1', 'h_2'):
                    if not getattr(self, name) >= 0:
                        raise DomainError(f"{name} debe ser ≥ 0")
            if self.kernel_x is None or self.kernel_y is None:
                raise DomainError("Los sistemas II necesitan kernel_x (f) y kernel_y (g)")
        else:
            if not self.coupling > 0:
                raise DomainError("coupling (G o K) debe ser positivo")
            if not self.beta >= 0:
                raise DomainError("β debe ser ≥ 0")
            if self.variant.is_discrete and not self.h >= 0:
                raise DomainError("h debe ser ≥ 0")
            if self.kernel is None:
                raise DomainError("Los sistemas I necesitan un núcleo para construir L_x")

    @property
    def C(self) -> float:
        return self.j_operator.C

    @property
    def gamma(self) -> float:
        return self.j_operator.gamma

    @property
    def delta(self) -> float:
        return self.j_operator.delta

    def to_dict(self) -> dict:
        data = {"variant": self.variant.value, "inner": self.inner.value,
                "x_is_quotient": self.x_is_quotient}
        if self.variant.is_coupled:
            data.update({
                "coupling_1": self.coupling_1, "coupling_2": self.coupling_2,
                "beta_1": self.beta_1, "beta_2": self.beta_2,
                "kernel_x": self.kernel_x.to_dict(), "kernel_y": self.kernel_y.to_dict(),
            })
            if self.variant.is_discrete:
                data.update({"h_1": self.h_1, "h_2": self.h_2})
        else:
            data.update({
                "coupling": self.coupling, "beta": self.beta,
                "kernel": self.kernel.to_dict(), "j": self.j_operator.to_dict(),
            })
            if self.variant.is_discrete:
                data["h"] = self.h
        return data


@dataclass(frozen=True, eq=False)
class SystemState:
    """
    Estado (x, y) en un instante.

    Attributes:
        x: Array k × d (representante centrado si X es un cociente)
        y: Representante centrado k × d
        t: Contador de iteraciones (discreto) o de pasos de la malla (continuo)
        time: Tiempo físico; en II(D) es t·h₂ (el de y)
        t1, t2: Índices de paso de x e y en II(D)
        y_mean: Componente diagonal (media de velocidades) llevada como dato aparte
        j_violations: Número acumulado de violaciones de la cota de J
    """

    x: np.ndarray
    y: np.ndarray
    t: int = 0
    time: float = 0.0
    t1: int = 0
    t2: int = 0
    y_mean: Optional[np.ndarray] = None
    j_violations: int = 0

    @property
    def k(self) -> int:
        return self.y.shape[0]

    @property
    def d(self) -> int:
        return self.y.shape[1]


@dataclass(frozen=True)
class JEvaluation:
    """Valor de J y comprobación de su cota en un punto."""

    value: np.ndarray
    norm: float
    bound: float
    violated: bool


@dataclass
class Trajectory:
    """
    Estados muestreados de una simulación.

    `coercivity` guarda φ_t (sistemas I) y `coercivity_2` η_t en II(C)/II(D)
    (ξ_t va en `coercivity`). `noise_norms` tiene una columna por fuente de ruido.
    `clip_thresholds` es None si el ruido no se recortó.
    """

    variant: SystemVariant
    inner: InnerProduct
    steps: np.ndarray
    times: np.ndarray
    xs: np.ndarray
    ys: np.ndarray
    norm_x: np.ndarray
    norm_y: np.ndarray
    coercivity: np.ndarray
    coercivity_2: Optional[np.ndarray] = None
    noise_norms: Optional[np.ndarray] = None
    clipped: Optional[np.ndarray] = None
    clip_thresholds: Optional[tuple] = None
    noise_free: bool = False
    j_violations: int = 0
    y_means: Optional[np.ndarray] = None
    aborted: Optional[str] = None
    physical_times_x: Optional[np.ndarray] = None

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def conditioned(self) -> bool:
        """True si la traza se produjo sin ruido o con el ruido recortado al evento."""
        return self.noise_free or self.clip_thresholds is not None


@dataclass(frozen=True)
class EmergenceTimes:
    """Primer paso/tiempo con ||y|| ≤ ν y, si procede, con ||x|| ≤ μ (None = no alcanzado)."""

    y_step: Optional[int] = None
    y_time: Optional[float] = None
    x_step: Optional[int] = None
    x_time: Optional[float] = None

    @property
    def y_reached(self) -> bool:
        return self.y_step is not None

    @property
    def x_reached(self) -> bool:
        return self.x_step is not None


# Umbral de explosión para los integradores
BLOW_UP_NORM = 1e12
