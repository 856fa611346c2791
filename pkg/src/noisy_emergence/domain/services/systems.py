# -*- coding: utf-8 -*-
"""
Servicio de sistemas dinámicos.

Recursiones exactas para I(D) y II(D) e integración explícita (Euler por
defecto, RK4 para el campo sin ruido) para I(C) y II(C). Los pasos son
funciones puras estado → estado; los bucles `run_*` e `integrate_*` muestrean
la trayectoria y registran normas, coercividades y el ruido aplicado.
"""
import logging
import math
from typing import Callable, List, Optional, Sequence

import numpy as np

from noisy_emergence.domain.errors import DomainError, SimulationAborted
from noisy_emergence.domain.models.system import (
    BLOW_UP_NORM,
    EmergenceTimes,
    JEvaluation,
    SystemParams,
    SystemState,
    SystemVariant,
    Trajectory,
)
from noisy_emergence.domain.services.operators import (
    adjacency_array,
    coercivity_array,
    laplacian_array,
)
from noisy_emergence.domain.services.quotient_space import array_norm, center_array, plain_norm

logger = logging.getLogger(__name__)

StopCondition = Callable[[float, float], bool]


def norm_of_x(x: np.ndarray, params: SystemParams) -> float:
    if params.x_is_quotient:
        return array_norm(x, params.inner)
    return plain_norm(x)


def norm_of_y(y: np.ndarray, params: SystemParams) -> float:
    return array_norm(y, params.inner)


def _laplacian(positions: np.ndarray, kernel) -> np.ndarray:
    return laplacian_array(adjacency_array(positions, kernel))


def _check_finite(step: int, time: float, *arrays: np.ndarray) -> None:
    for array in arrays:
        if not np.all(np.isfinite(array)):
            raise SimulationAborted(step, "estado no finito", time)


def _check_blow_up(step: int, time: float, *norms: float) -> None:
    for value in norms:
        if value > BLOW_UP_NORM:
            raise SimulationAborted(step, f"norma {value:.3e} mayor que {BLOW_UP_NORM:.0e}", time)


def j_operator(x: np.ndarray, y: np.ndarray, params: SystemParams,
               continuous: Optional[bool] = None) -> JEvaluation:
    """
    Evalúa J(x, y) y su cota C(1 + ||x||)^γ||y||^δ, o C(1 + ||x||²)^{γ/2}||y||^δ en continuo.

    Una violación no detiene la simulación: se marca en el resultado y la
    ejecución deja de estar certificada.
    """
    if continuous is None:
        continuous = not params.variant.is_discrete
    value = params.j_operator(x, y)
    if value.shape != x.shape:
        raise DomainError(f"J devolvió forma {value.shape}, se esperaba {x.shape}")
    if params.x_is_quotient:
        value = center_array(value)
    norm = norm_of_x(value, params)
    nx = norm_of_x(x, params)
    ny = norm_of_y(y, params)
    if continuous:
        bound = params.C * (1.0 + nx * nx) ** (params.gamma / 2.0) * ny ** params.delta
    else:
        bound = params.C * (1.0 + nx) ** params.gamma * ny ** params.delta
    violated = norm > bound * (1.0 + 1e-12) + 1e-15
    return JEvaluation(value=value, norm=norm, bound=bound, violated=bool(violated))


def step_ID(state: SystemState, params: SystemParams, noise_draw: Optional[np.ndarray] = None) -> SystemState:
    """
    Un paso de I(D): x ← x + hJ(x, y); y ← (I − hL_x)y + hH, recentrado.

    Si el estado lleva la media de velocidades (`y_mean`), el operador se
    aplica a la velocidad completa y la media se vuelve a separar.
    """
    h = params.h
    x, y = state.x, state.y
    k = y.shape[0]
    j_eval = j_operator(x, y, params, continuous=False)
    x_new = x + h * j_eval.value
    if params.x_is_quotient:
        x_new = center_array(x_new)
    S = np.eye(k) - h * _laplacian(x, params.kernel)
    noise = 0.0 if noise_draw is None else h * noise_draw
    y_mean = state.y_mean
    if y_mean is not None:
        full = S @ (y + y_mean) + noise
        y_mean = full.mean(axis=0, keepdims=True)
        y_new = center_array(full)
    else:
        y_new = center_array(S @ y + noise)
    step = state.t + 1
    time = step * h
    _check_finite(step, time, x_new, y_new)
    return SystemState(x=x_new, y=y_new, t=step, time=time, t1=step, t2=step, y_mean=y_mean,
                       j_violations=state.j_violations + int(j_eval.violated))


def step_IID(state: SystemState, params: SystemParams, noise_draw_1: Optional[np.ndarray] = None,
             noise_draw_2: Optional[np.ndarray] = None) -> SystemState:
    """
    Un paso de II(D) en orden de Jacobi: x ← S₁(y)x + h₁H₁, y ← S₂(x)y + h₂H₂,
    con S₁(y) = I − h₁L_{1y} y S₂(x) = I − h₂L_{2x} evaluados en el estado previo.
    """
    x, y = state.x, state.y
    k = y.shape[0]
    S1 = np.eye(k) - params.h_1 * _laplacian(y, params.kernel_y)
    S2 = np.eye(k) - params.h_2 * _laplacian(x, params.kernel_x)
    x_new = S1 @ x
    if noise_draw_1 is not None:
        x_new = x_new + params.h_1 * noise_draw_1
    if params.x_is_quotient:
        x_new = center_array(x_new)
    y_new = S2 @ y
    if noise_draw_2 is not None:
        y_new = y_new + params.h_2 * noise_draw_2
    y_new = center_array(y_new)
    step = state.t + 1
    time = step * params.h_2
    _check_finite(step, time, x_new, y_new)
    return SystemState(x=x_new, y=y_new, t=step, time=time, t1=state.t1 + 1, t2=state.t2 + 1,
                       y_mean=state.y_mean, j_violations=state.j_violations)


class _Recorder:
    """Acumula las muestras de una trayectoria."""

    def __init__(self, params: SystemParams, sources: int):
        self.params = params
        self.sources = sources
        self.steps: List[int] = []
        self.times: List[float] = []
        self.xs: List[np.ndarray] = []
        self.ys: List[np.ndarray] = []
        self.norm_x: List[float] = []
        self.norm_y: List[float] = []
        self.coercivity: List[float] = []
        self.coercivity_2: List[float] = []
        self.noise_norms: List[List[float]] = []
        self.clipped: List[bool] = []
        self.y_means: List[np.ndarray] = []
        self.times_x: List[float] = []

    def add(self, state: SystemState, nx: float, ny: float) -> None:
        params = self.params
        self.steps.append(state.t)
        self.times.append(state.time)
        self.xs.append(np.array(state.x))
        self.ys.append(np.array(state.y))
        self.norm_x.append(nx)
        self.norm_y.append(ny)
        if params.variant.is_coupled:
            self.coercivity.append(coercivity_array(_laplacian(state.x, params.kernel_x)).value)
            self.coercivity_2.append(coercivity_array(_laplacian(state.y, params.kernel_y)).value)
            self.times_x.append(state.t1 * params.h_1 if params.variant.is_discrete else state.time)
        else:
            self.coercivity.append(coercivity_array(_laplacian(state.x, params.kernel)).value)
        if state.y_mean is not None:
            self.y_means.append(np.array(state.y_mean).ravel())

    def add_noise(self, norms: Sequence[float], clipped: bool) -> None:
        self.noise_norms.append(list(norms))
        self.clipped.append(clipped)

    def build(self, drawers: Sequence, j_violations: int, aborted: Optional[str]) -> Trajectory:
        params = self.params
        noise_free = all(drawer is None or drawer.is_zero for drawer in drawers)
        active = [drawer for drawer in drawers if drawer is not None and not drawer.is_zero]
        if active and all(drawer.clip_threshold is not None for drawer in active):
            clip_thresholds = tuple(
                None if drawer is None else drawer.clip_threshold for drawer in drawers
            )
        else:
            clip_thresholds = None
        # La última muestra de estado no tiene ruido asociado
        noise_rows = self.noise_norms + [[0.0] * self.sources] * (len(self.steps) - len(self.noise_norms))
        clipped_rows = self.clipped + [False] * (len(self.steps) - len(self.clipped))
        return Trajectory(
            variant=params.variant,
            inner=params.inner,
            steps=np.array(self.steps, dtype=int),
            times=np.array(self.times, dtype=float),
            xs=np.array(self.xs),
            ys=np.array(self.ys),
            norm_x=np.array(self.norm_x),
            norm_y=np.array(self.norm_y),
            coercivity=np.array(self.coercivity),
            coercivity_2=np.array(self.coercivity_2) if params.variant.is_coupled else None,
            noise_norms=np.array(noise_rows, dtype=float).reshape(len(self.steps), self.sources),
            clipped=np.array(clipped_rows, dtype=bool),
            clip_thresholds=clip_thresholds,
            noise_free=noise_free,
            j_violations=j_violations,
            y_means=np.array(self.y_means) if self.y_means else None,
            aborted=aborted,
            physical_times_x=np.array(self.times_x) if self.times_x else None,
        )


def _norms(state: SystemState, params: SystemParams):
    return norm_of_x(state.x, params), norm_of_y(state.y, params)


def run_discrete(initial: SystemState, params: SystemParams, drawers: Sequence, steps: int,
                 stop_when: Optional[StopCondition] = None) -> Trajectory:
    """
    Itera I(D) o II(D) hasta `steps` pasos.

    Args:
        initial: Estado inicial
        params: Parámetros (variante I(D) o II(D))
        drawers: Fuentes de ruido: [H] para I(D), [H₁, H₂] para II(D); None = sin ruido
        steps: Número máximo de iteraciones
        stop_when: Condición opcional (||x||, ||y||) → bool para parar antes

    Returns:
        Trajectory con steps + 1 muestras como máximo. Si la simulación
        explota, la traza se corta y `aborted` lleva el diagnóstico.
    """
    if not params.variant.is_discrete:
        raise DomainError(f"run_discrete no admite la variante {params.variant.value}")
    recorder = _Recorder(params, sources=len(drawers))
    state = initial
    nx, ny = _norms(state, params)
    recorder.add(state, nx, ny)
    aborted = None
    for t in range(steps):
        if stop_when is not None and stop_when(nx, ny):
            break
        try:
            if params.variant is SystemVariant.I_D:
                drawer = drawers[0] if drawers else None
                draw = drawer.draw(t, ny) if drawer is not None else None
                state = step_ID(state, params, None if draw is None else draw.value)
                draws = [draw]
            else:
                d1, d2 = (list(drawers) + [None, None])[:2]
                draw1 = d1.draw(t, nx) if d1 is not None else None
                draw2 = d2.draw(t, ny) if d2 is not None else None
                state = step_IID(state, params, None if draw1 is None else draw1.value,
                                 None if draw2 is None else draw2.value)
                draws = [draw1, draw2]
            nx, ny = _norms(state, params)
            _check_blow_up(state.t, state.time, nx, ny)
        except SimulationAborted as exc:
            logger.warning("Simulación %s abortada: %s", params.variant.value, exc.diagnostic)
            aborted = str(exc)
            break
        recorder.add_noise([0.0 if d is None else d.raw_norm for d in draws],
                           any(d is not None and d.clipped for d in draws))
        recorder.add(state, nx, ny)
    return recorder.build(drawers, state.j_violations, aborted)


def _vector_field_IC(x: np.ndarray, y: np.ndarray, params: SystemParams, noise: Optional[np.ndarray]):
    j_eval = j_operator(x, y, params, continuous=True)
    dx = j_eval.value
    dy = -_laplacian(x, params.kernel) @ y
    if noise is not None:
        dy = dy + noise
    return dx, center_array(dy), j_eval.violated


def _vector_field_IIC(x: np.ndarray, y: np.ndarray, params: SystemParams,
                      noise_1: Optional[np.ndarray], noise_2: Optional[np.ndarray]):
    dx = -_laplacian(y, params.kernel_y) @ x
    dy = -_laplacian(x, params.kernel_x) @ y
    if noise_1 is not None:
        dx = dx + noise_1
    if noise_2 is not None:
        dy = dy + noise_2
    if params.x_is_quotient:
        dx = center_array(dx)
    return dx, center_array(dy), False


def _rk4(x, y, dt, field):
    k1x, k1y, v1 = field(x, y)
    k2x, k2y, v2 = field(x + 0.5 * dt * k1x, y + 0.5 * dt * k1y)
    k3x, k3y, v3 = field(x + 0.5 * dt * k2x, y + 0.5 * dt * k2y)
    k4x, k4y, v4 = field(x + dt * k3x, y + dt * k3y)
    x_new = x + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
    y_new = y + dt / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y)
    return x_new, y_new, v1 or v2 or v3 or v4


def _integrate(initial: SystemState, params: SystemParams, drawers: Sequence, dt: float, T: float,
               method: str, stop_when: Optional[StopCondition]) -> Trajectory:
    if params.variant.is_discrete:
        raise DomainError(f"La integración continua no admite la variante {params.variant.value}")
    if not dt > 0:
        raise DomainError(f"dt debe ser positivo, recibido {dt}")
    if T < 0:
        raise DomainError(f"T debe ser ≥ 0, recibido {T}")
    if method not in ('euler', 'rk4'):
        raise DomainError(f"Método de integración desconocido: {method}")
    if method == 'rk4' and any(d is not None and not d.is_zero for d in drawers):
        raise DomainError("RK4 solo se ofrece para el campo sin ruido")
    n_steps = int(math.ceil(T / dt - 1e-9))
    coupled = params.variant is SystemVariant.II_C
    recorder = _Recorder(params, sources=len(drawers))
    state = initial
    nx, ny = _norms(state, params)
    recorder.add(state, nx, ny)
    aborted = None
    violations = state.j_violations
    for n in range(n_steps):
        if stop_when is not None and stop_when(nx, ny):
            break
        x, y = state.x, state.y
        try:
            if coupled:
                d1, d2 = (list(drawers) + [None, None])[:2]
                draw1 = d1.draw(n, nx) if d1 is not None else None
                draw2 = d2.draw(n, ny) if d2 is not None else None
                draws = [draw1, draw2]
                noise_1 = None if draw1 is None else draw1.value
                noise_2 = None if draw2 is None else draw2.value

                def field(u, v):
                    return _vector_field_IIC(u, v, params, noise_1, noise_2)
            else:
                drawer = drawers[0] if drawers else None
                draw = drawer.draw(n, ny) if drawer is not None else None
                draws = [draw]
                noise = None if draw is None else draw.value

                def field(u, v):
                    return _vector_field_IC(u, v, params, noise)

            if method == 'rk4':
                x_new, y_new, violated = _rk4(x, y, dt, field)
            else:
                dx, dy, violated = field(x, y)
                x_new, y_new = x + dt * dx, y + dt * dy
            if params.x_is_quotient:
                x_new = center_array(x_new)
            y_new = center_array(y_new)
            step = n + 1
            time = step * dt
            _check_finite(step, time, x_new, y_new)
            violations += int(violated)
            state = SystemState(x=x_new, y=y_new, t=step, time=time, t1=step, t2=step,
                                y_mean=state.y_mean, j_violations=violations)
            nx, ny = _norms(state, params)
            _check_blow_up(step, time, nx, ny)
        except SimulationAborted as exc:
            logger.warning("Integración %s abortada: %s", params.variant.value, exc.diagnostic)
            aborted = str(exc)
            break
        recorder.add_noise([0.0 if d is None else d.raw_norm for d in draws],
                           any(d is not None and d.clipped for d in draws))
        recorder.add(state, nx, ny)
    return recorder.build(drawers, violations, aborted)


def integrate_IC(initial: SystemState, params: SystemParams, path_noise=None, dt: float = 0.01,
                 T: float = 1.0, method: str = 'euler',
                 stop_when: Optional[StopCondition] = None) -> Trajectory:
    """
    Integra I(C): x′ = J(x, y), y′ = −L_x y + εH(t), en la malla t_n = n·dt hasta T.

    Registra φ_t en cada punto de la malla; θ_t es su mínimo acumulado.
    """
    return _integrate(initial, params, [path_noise], dt, T, method, stop_when)


def integrate_IIC(initial: SystemState, params: SystemParams, path_noise_1=None, path_noise_2=None,
                  dt: float = 0.01, T: float = 1.0, method: str = 'euler',
                  stop_when: Optional[StopCondition] = None) -> Trajectory:
    """Integra II(C): x′ = −L_{1y}x + H₁(t), y′ = −L_{2x}y + H₂(t); registra ξ_t y η_t."""
    return _integrate(initial, params, [path_noise_1, path_noise_2], dt, T, method, stop_when)


def _first_index(values: np.ndarray, threshold: float) -> Optional[int]:
    hits = np.nonzero(values <= threshold)[0]
    return int(hits[0]) if hits.size else None


def detect_emergence(trajectory: Trajectory, mu: Optional[float], nu: float) -> EmergenceTimes:
    """
    Primer paso/tiempo con ||y|| ≤ ν y, en los sistemas II, con ||x|| ≤ μ.

    Returns:
        EmergenceTimes con None donde el umbral no se alcanza
    """
    if not nu > 0 or (mu is not None and not mu > 0):
        raise DomainError("Los umbrales μ y ν deben ser positivos")
    y_index = _first_index(trajectory.norm_y, nu)
    x_index = None
    if trajectory.variant.is_coupled and mu is not None:
        x_index = _first_index(trajectory.norm_x, mu)
    x_times = trajectory.physical_times_x if trajectory.physical_times_x is not None else trajectory.times
    return EmergenceTimes(
        y_step=None if y_index is None else int(trajectory.steps[y_index]),
        y_time=None if y_index is None else float(trajectory.times[y_index]),
        x_step=None if x_index is None else int(trajectory.steps[x_index]),
        x_time=None if x_index is None else float(x_times[x_index]),
    )
