# -*- coding: utf-8 -*-
"""
Entidades de la teoría: constantes del estado inicial, informes de cotas
de probabilidad y comprobaciones de trayectorias.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

from noisy_emergence.domain.models.coupling import HypothesisCheck
from noisy_emergence.domain.models.system import SystemVariant


class HypothesisCase(str, Enum):
    I = "(i)"
    II = "(ii)"
    III = "(iii)"
    NONE = "none"


class TheoremTag(str, Enum):
    THM1 = "thm1"
    THM1_JOINT = "thm1-joint"
    THM2 = "thm2"
    THM3 = "thm3"
    THM3_JOINT = "thm3-joint"
    THM4 = "thm4"
    COR1 = "cor1"


def json_number(value):
    """Float apto para JSON: los no finitos se escriben como cadena."""
    if value is None:
        return None
    value = float(value)
    if math.isfinite(value):
        return value
    if math.isnan(value):
        return "nan"
    return "inf" if value > 0 else "-inf"


@dataclass
class EmergenceConstants:
    """
    Constantes que solo dependen del estado inicial y de los parámetros.

    Los campos que no corresponden a la variante quedan en None. Cuando un
    objetivo μ o ν no es admisible, el tiempo correspondiente queda en None
    y el motivo se añade a `reasons`.
    """

    variant: SystemVariant
    norm_x0: float
    norm_y0: float
    mu: Optional[float] = None
    nu: Optional[float] = None
    Q: Optional[float] = None
    a: Optional[float] = None
    b: Optional[float] = None
    alpha: Optional[float] = None
    exponent: Optional[float] = None
    U0: Optional[float] = None
    B0: Optional[float] = None
    B1: Optional[float] = None
    H0: Optional[float] = None
    H1: Optional[float] = None
    H2: Optional[float] = None
    T0: Optional[float] = None
    T1: Optional[float] = None
    T2: Optional[float] = None
    T3: Optional[float] = None
    h_max: Optional[float] = None
    contraction: Optional[float] = None
    x_cap: Optional[float] = None
    case: HypothesisCase = HypothesisCase.NONE
    reasons: List[str] = field(default_factory=list)
    formulas: Dict[str, str] = field(default_factory=dict)

    @property
    def applicable(self) -> bool:
        return not self.reasons

    def to_dict(self) -> dict:
        names = ["norm_x0", "norm_y0", "mu", "nu", "Q", "a", "b", "alpha", "exponent", "U0", "B0",
                 "B1", "H0", "H1", "H2", "T0", "T1", "T2", "T3", "h_max", "contraction", "x_cap"]
        data = {name: json_number(getattr(self, name)) for name in names if getattr(self, name) is not None}
        data.update({
            "variant": self.variant.value,
            "case": self.case.value,
            "applicable": self.applicable,
            "reasons": list(self.reasons),
            "formulas": dict(self.formulas),
        })
        return data


@dataclass
class TheoremCheck:
    """Caso de hipótesis identificado y desigualdades evaluadas para un teorema."""

    theorem: str
    case: HypothesisCase
    checks: List[HypothesisCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        # Los sistemas II no distinguen casos
        if self.theorem in (TheoremTag.THM1.value, TheoremTag.THM3.value) and self.case is HypothesisCase.NONE:
            return False
        return all(check.passed for check in self.checks)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "case": self.case.value,
            "passed": self.passed,
            "checks": [check.to_dict() for check in self.checks],
        }


@dataclass
class BoundReport:
    """
    Cota inferior de probabilidad de un teorema.

    Attributes:
        theorem: Etiqueta del teorema
        probability: Cota en [0, 1]; None si no es aplicable
        horizon: Horizonte usado (entero en los teoremas discretos)
        horizon_raw: Horizonte real antes de redondear
        factors: Valores de F usados
        thresholds: Umbrales de recorte ℋ·objetivo usados como argumento de F
        checks: Hipótesis evaluadas
        reasons: Motivos de inaplicabilidad
    """

    theorem: TheoremTag
    probability: Optional[float]
    horizon: Optional[float] = None
    horizon_raw: Optional[float] = None
    factors: Dict[str, float] = field(default_factory=dict)
    thresholds: Dict[str, float] = field(default_factory=dict)
    checks: List[HypothesisCheck] = field(default_factory=list)
    reasons: List[str] = field(default_factory=list)

    @property
    def applicable(self) -> bool:
        return self.probability is not None and not self.reasons \
            and all(check.passed for check in self.checks)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem.value,
            "probability": json_number(self.probability),
            "horizon": json_number(self.horizon),
            "horizon_raw": json_number(self.horizon_raw),
            "factors": {key: json_number(value) for key, value in self.factors.items()},
            "thresholds": {key: json_number(value) for key, value in self.thresholds.items()},
            "checks": [check.to_dict() for check in self.checks],
            "applicable": self.applicable,
            "reasons": list(self.reasons),
        }


@dataclass
class EnvelopeCheck:
    """
    Una desigualdad comprobada en todos los instantes de una traza.

    `worst_slack` es la menor holgura (negativa si se viola) y
    `first_violation` el primer paso de la malla con holgura negativa.
    """

    name: str
    evaluated: int = 0
    worst_slack: float = math.inf
    first_violation: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.first_violation is None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "evaluated": self.evaluated,
            "worst_slack": json_number(self.worst_slack),
            "first_violation": self.first_violation,
        }


@dataclass
class ViolationReport:
    """Resultado de verificar las envolventes de una traza."""

    variant: SystemVariant
    checks: List[EnvelopeCheck] = field(default_factory=list)
    skipped: bool = False
    notice: Optional[str] = None
    limit_point_norm: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def violations(self) -> int:
        return sum(0 if check.passed else 1 for check in self.checks)

    def check(self, name: str) -> EnvelopeCheck:
        for item in self.checks:
            if item.name == name:
                return item
        raise KeyError(name)

    @property
    def worst_slack(self) -> float:
        return min((check.worst_slack for check in self.checks), default=math.inf)

    def to_dict(self) -> dict:
        return {
            "variant": self.variant.value,
            "skipped": self.skipped,
            "notice": self.notice,
            "passed": self.passed,
            "violations": self.violations,
            "limit_point_norm": json_number(self.limit_point_norm),
            "checks": [check.to_dict() for check in self.checks],
        }
