# -*- coding: utf-8 -*-
"""
Entidades del arnés: configuración de escenarios, escenarios construidos,
resultados de ensayos y resúmenes de Monte Carlo.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from noisy_emergence.domain.models.coupling import HypothesisReport
from noisy_emergence.domain.models.system import SystemParams, SystemState
from noisy_emergence.domain.models.theory import (
    BoundReport,
    EmergenceConstants,
    TheoremCheck,
    TheoremTag,
    json_number,
)


class Verdict(str, Enum):
    RESPECTED = "respected"
    VIOLATED = "violated"
    INAPPLICABLE = "inapplicable"


class EventKind(str, Enum):
    # Solo emergencia dentro del horizonte del teorema
    EMERGENCE = "emergence"
    # Emergencia más cola de Cauchy de x (segunda parte de los teoremas I)
    JOINT = "joint"


@dataclass(frozen=True)
class InitialStateConfig:
    """
    Generador del estado inicial.

    `explicit` usa las coordenadas dadas; `random_box` muestrea cada
    coordenada uniforme en [−escala, escala] con el flujo de semillas del
    estado inicial y separa la media de las velocidades.
    """

    kind: str = "random_box"
    x: Optional[Tuple[Tuple[float, ...], ...]] = None
    y: Optional[Tuple[Tuple[float, ...], ...]] = None
    x_scale: float = 1.0
    y_scale: float = 0.1
    y_mean: Optional[Tuple[float, ...]] = None


@dataclass(frozen=True)
class NoiseConfig:
    """Configuración de una fuente de ruido; `clip` recorta al umbral de las constantes."""

    kind: str = "zero"
    radius: float = 0.0
    sigma: float = 0.0
    refresh: Optional[float] = None
    ou_rate: float = 0.0
    amplitude: float = 1.0
    mc_paths: int = 10_000
    grid_step: Optional[float] = None
    clip: bool = False

    def to_dict(self) -> dict:
        data = {"kind": self.kind, "clip": self.clip}
        if self.kind in ("ball", "cube"):
            data["radius"] = self.radius
        if self.kind == "gaussian":
            data["sigma"] = self.sigma
        if self.refresh is not None:
            data["refresh"] = self.refresh
        if self.ou_rate:
            data.update({"ou_rate": self.ou_rate, "mc_paths": self.mc_paths, "grid_step": self.grid_step})
        if self.amplitude != 1.0:
            data["amplitude"] = self.amplitude
        return data


@dataclass(frozen=True)
class ScenarioConfig:
    """
    Configuración validada de un escenario.

    Attributes:
        name: Nombre del escenario
        params: Parámetros del sistema (incluye variante, núcleos y J)
        k, d: Población y dimensión por agente
        initial: Generador del estado inicial
        noise: Fuentes de ruido por papel ('x' para H₁, 'y' para H o H₂)
        mu, nu: Objetivos de casi-emergencia
        horizon: Máximo de iteraciones (discreto); None = 4·⌈T⌉
        max_time: Tiempo máximo (continuo); None = 4·T
        dt: Paso de integración (continuo)
        method: 'euler' o 'rk4'
        trials: Número de ensayos N
        seed: Semilla maestra
        event: Evento comparado en Monte Carlo
        outputs: Rutas de salida opcionales ('trace', 'summary', 'sweep')
        preset: Preset de partida, si lo hay
    """

    name: str
    params: SystemParams
    k: int
    d: int
    initial: InitialStateConfig = field(default_factory=InitialStateConfig)
    noise: Dict[str, NoiseConfig] = field(default_factory=dict)
    mu: Optional[float] = None
    nu: Optional[float] = None
    horizon: Optional[int] = None
    max_time: Optional[float] = None
    dt: float = 0.01
    method: str = "euler"
    trials: int = 1000
    seed: int = 0
    event: EventKind = EventKind.EMERGENCE
    outputs: Dict[str, str] = field(default_factory=dict)
    preset: Optional[str] = None

    @property
    def variant(self):
        return self.params.variant

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "preset": self.preset,
            "k": self.k,
            "d": self.d,
            "params": self.params.to_dict(),
            "noise": {role: cfg.to_dict() for role, cfg in sorted(self.noise.items())},
            "mu": self.mu,
            "nu": self.nu,
            "horizon": self.horizon,
            "max_time": self.max_time,
            "dt": self.dt if not self.params.variant.is_discrete else None,
            "method": self.method,
            "trials": self.trials,
            "seed": self.seed,
            "event": self.event.value,
        }


@dataclass
class Scenario:
    """
    Escenario listo para simular: estado inicial, constantes, certificación
    de hipótesis, leyes de ruido y cota del teorema.
    """

    config: ScenarioConfig
    params: SystemParams
    initial: SystemState
    constants: EmergenceConstants
    hypotheses: TheoremCheck
    operator_report: HypothesisReport
    theorem: TheoremTag
    bound: BoundReport
    noise_specs: Dict[str, Any] = field(default_factory=dict)
    clip_thresholds: Dict[str, Optional[float]] = field(default_factory=dict)
    event_thresholds: Dict[str, float] = field(default_factory=dict)
    steps: Optional[int] = None
    max_time: Optional[float] = None
    event_horizon: Optional[float] = None
    # Horizonte de cada fuente de ruido para comprobar si el ensayo quedó dentro del evento
    source_horizons: List[Optional[float]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.operator_report.passed and self.hypotheses.passed and self.constants.applicable

    def to_dict(self) -> dict:
        return {
            "scenario": self.config.to_dict(),
            "theorem": self.theorem.value,
            "certified": self.certified,
            "constants": self.constants.to_dict(),
            "hypotheses": self.hypotheses.to_dict(),
            "operators": self.operator_report.to_dict(),
            "bound": self.bound.to_dict(),
            "horizon": {"steps": self.steps, "max_time": json_number(self.max_time),
                        "event_horizon": json_number(self.event_horizon)},
            "noise": {role: spec.to_dict() for role, spec in sorted(self.noise_specs.items())},
            "notes": list(self.notes),
        }


@dataclass
class TrialResult:
    """
    Resultado de un ensayo.

    `reached_*` es True si y solo si el tiempo de emergencia correspondiente
    está dentro del horizonte simulado. `inside_event` indica que todo el
    ruido hasta el horizonte del teorema estuvo bajo el umbral ℋ·objetivo.
    """

    trial: int
    seed: int
    y_step: Optional[int] = None
    y_time: Optional[float] = None
    x_step: Optional[int] = None
    x_time: Optional[float] = None
    event_reached: bool = False
    inside_event: bool = False
    clipped_steps: int = 0
    envelope_violations: int = 0
    envelope_checked: bool = False
    j_violations: int = 0
    terminal_norm_x: Optional[float] = None
    terminal_norm_y: Optional[float] = None
    failed: bool = False
    diagnostic: Optional[str] = None

    @property
    def reached_y(self) -> bool:
        return self.y_step is not None

    @property
    def reached_x(self) -> bool:
        return self.x_step is not None

    def to_dict(self) -> dict:
        return {
            "trial": self.trial,
            "seed": self.seed,
            "y_step": self.y_step,
            "y_time": json_number(self.y_time),
            "x_step": self.x_step,
            "x_time": json_number(self.x_time),
            "reached_y": self.reached_y,
            "reached_x": self.reached_x,
            "event_reached": self.event_reached,
            "inside_event": self.inside_event,
            "clipped_steps": self.clipped_steps,
            "envelope_checked": self.envelope_checked,
            "envelope_violations": self.envelope_violations,
            "j_violations": self.j_violations,
            "terminal_norm_x": json_number(self.terminal_norm_x),
            "terminal_norm_y": json_number(self.terminal_norm_y),
            "failed": self.failed,
            "diagnostic": self.diagnostic,
        }


@dataclass
class MonteCarloSummary:
    """
    Resumen de N ensayos frente a la cota del teorema.

    El veredicto es 'violated' solo si la cota supera el extremo superior del
    intervalo de Wilson al 95 %.
    """

    scenario: str
    theorem: TheoremTag
    trials: int
    successes: int
    wilson_lo: float
    wilson_hi: float
    bound: Optional[float]
    verdict: Verdict
    event_horizon: Optional[float] = None
    inside_event: int = 0
    failures: int = 0
    envelope_violations: int = 0
    reasons: List[str] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def empirical(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "theorem": self.theorem.value,
            "trials": self.trials,
            "successes": self.successes,
            "empirical": self.empirical,
            "wilson_lo": self.wilson_lo,
            "wilson_hi": self.wilson_hi,
            "bound": json_number(self.bound),
            "verdict": self.verdict.value,
            "event_horizon": json_number(self.event_horizon),
            "inside_event": self.inside_event,
            "failures": self.failures,
            "envelope_violations": self.envelope_violations,
            "reasons": list(self.reasons),
            "metadata": self.metadata,
        }


def as_tuple_matrix(values) -> Optional[Tuple[Tuple[float, ...], ...]]:
    if values is None:
        return None
    array = np.asarray(values, dtype=float)
    if array.ndim == 1:
        array = array.reshape(-1, 1)
    return tuple(tuple(float(v) for v in row) for row in array)
