# -*- coding: utf-8 -*-
"""
Servicio del arnés de verificación.

Construye escenarios a partir de configuraciones validadas, ejecuta ensayos
deterministas por (semilla maestra, índice de ensayo), estima por Monte Carlo
la probabilidad del evento de cada teorema y la compara con su cota inferior.
"""
import copy
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import norm as normal_distribution

from noisy_emergence.domain.errors import ConfigurationError, DomainError
from noisy_emergence.domain.models.noise import NoiseKind, NoiseSpec, PathNoiseSpec
from noisy_emergence.domain.models.scenario import (
    EventKind,
    MonteCarloSummary,
    NoiseConfig,
    Scenario,
    ScenarioConfig,
    TrialResult,
    Verdict,
)
from noisy_emergence.domain.models.system import SystemState, Trajectory
from noisy_emergence.domain.models.theory import TheoremTag, json_number
from noisy_emergence.domain.ports.result_exporter import ResultExporter
from noisy_emergence.domain.services.noise_service import (
    STREAM_H1,
    STREAM_H2,
    STREAM_INITIAL,
    NoiseDrawer,
    NoiseService,
    PathNoiseDrawer,
    SeedStream,
)
from noisy_emergence.domain.services.operators import verify_operator_hypotheses
from noisy_emergence.domain.services.quotient_space import center_array
from noisy_emergence.domain.services.systems import (
    detect_emergence,
    integrate_IC,
    integrate_IIC,
    run_discrete,
)
from noisy_emergence.domain.services.theory import (
    ROUNDING_SLACK,
    cauchy_tail,
    check_hypotheses,
    compute_constants,
    default_theorem,
    iteration_count,
    probability_bound,
    verify_trajectory,
)

logger = logging.getLogger(__name__)

WILSON_CONFIDENCE = 0.95
# Horizontes cuando las constantes no dan un tiempo de emergencia
FALLBACK_STEPS = 1000
FALLBACK_TIME = 10.0
HORIZON_FACTOR = 4

SWEEP_COLUMNS = ["T", "empirical", "wilson_lo", "wilson_hi", "bound", "verdict", "error"]

ConfigParser = Callable[[dict], ScenarioConfig]


def wilson_interval(successes: int, trials: int, confidence: float = WILSON_CONFIDENCE) -> Tuple[float, float]:
    """
    Intervalo de Wilson para una proporción binomial.

    Raises:
        DomainError: Si trials < 1 o successes fuera de [0, trials]
    """
    if trials < 1:
        raise DomainError("El intervalo de Wilson necesita al menos un ensayo")
    if not 0 <= successes <= trials:
        raise DomainError(f"Éxitos fuera de rango: {successes} de {trials}")
    z = float(normal_distribution.ppf(0.5 + confidence / 2.0))
    p = successes / trials
    denominator = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denominator
    half = z / denominator * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials))
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


def set_path(raw: dict, dotted: str, value: Any) -> dict:
    """Copia de `raw` con el valor de la ruta con puntos sustituido (crea los objetos intermedios)."""
    result = copy.deepcopy(raw)
    node = result
    parts = dotted.split(".")
    for part in parts[:-1]:
        child = node.get(part)
        if not isinstance(child, dict):
            child = {}
            node[part] = child
        node = child
    node[parts[-1]] = copy.deepcopy(value)
    return result


def trace_columns(scenario_or_variant) -> List[str]:
    variant = getattr(scenario_or_variant, "variant", scenario_or_variant)
    if variant.is_coupled:
        return ["t", "time", "norm_x", "norm_y", "xi", "eta", "noise_norm_1", "noise_norm_2", "clipped_flag"]
    return ["t", "time", "norm_x", "norm_y", "phi", "noise_norm", "clipped_flag"]


def trace_rows(trajectory: Trajectory) -> List[Dict[str, Any]]:
    """Filas de la traza; el ruido de la fila t es el aplicado en el paso t → t+1."""
    rows = []
    for i in range(trajectory.length):
        row = {
            "t": int(trajectory.steps[i]),
            "time": float(trajectory.times[i]),
            "norm_x": float(trajectory.norm_x[i]),
            "norm_y": float(trajectory.norm_y[i]),
        }
        if trajectory.variant.is_coupled:
            row["xi"] = float(trajectory.coercivity[i])
            row["eta"] = float(trajectory.coercivity_2[i])
            row["noise_norm_1"] = float(trajectory.noise_norms[i, 0])
            row["noise_norm_2"] = float(trajectory.noise_norms[i, 1])
        else:
            row["phi"] = float(trajectory.coercivity[i])
            row["noise_norm"] = float(trajectory.noise_norms[i, 0])
        row["clipped_flag"] = int(bool(trajectory.clipped[i]))
        rows.append(row)
    return rows


# ----------------------------------------------------------------------
# Construcción del escenario
# ----------------------------------------------------------------------

def initial_state(config: ScenarioConfig) -> SystemState:
    """
    Estado inicial del escenario.

    `random_box` usa el flujo de semillas del estado inicial con ensayo 0,
    de modo que todos los ensayos parten del mismo estado.
    """
    spec = config.initial
    shape = (config.k, config.d)
    if spec.kind == "explicit":
        x = np.array(spec.x, dtype=float).reshape(shape)
        y = np.array(spec.y, dtype=float).reshape(shape)
    else:
        rng = SeedStream(config.seed, 0, STREAM_INITIAL).generator(0)
        x = rng.uniform(-spec.x_scale, spec.x_scale, shape)
        y = rng.uniform(-spec.y_scale, spec.y_scale, shape)
    if config.params.x_is_quotient:
        x = center_array(x)
    y_mean = None
    if spec.y_mean is not None:
        y_mean = np.asarray(spec.y_mean, dtype=float).reshape(1, config.d)
    return SystemState(x=x, y=center_array(y), y_mean=y_mean)


def _roles(config: ScenarioConfig) -> List[str]:
    return ["x", "y"] if config.variant.is_coupled else ["y"]


def _noise_spec(config: ScenarioConfig, role: str, cfg: NoiseConfig):
    params = config.params
    quotient = role == "y" or params.x_is_quotient
    try:
        base = NoiseSpec(kind=NoiseKind(cfg.kind), k=config.k, d=config.d, quotient=quotient,
                         inner=params.inner, radius=cfg.radius, sigma=cfg.sigma)
        if config.variant.is_discrete:
            return base
        refresh = 0.0 if cfg.ou_rate > 0 else (cfg.refresh or config.dt)
        return PathNoiseSpec(base=base, refresh=refresh, ou_rate=cfg.ou_rate, amplitude=cfg.amplitude,
                             mc_paths=cfg.mc_paths, grid_step=cfg.grid_step or config.dt)
    except DomainError as e:
        raise ConfigurationError(f"noise.{role}", str(e))


def _clip_threshold(scenario_constants, role: str, coupled: bool) -> Optional[float]:
    if not coupled:
        return scenario_constants.H0
    return scenario_constants.H1 if role == "x" else scenario_constants.H2


def _event_horizons(theorem: TheoremTag, constants) -> Tuple[Optional[float], List[Optional[float]]]:
    """
    Horizonte del evento y horizonte de cada fuente de ruido para `inside_event`.

    En los teoremas discretos el horizonte es el número de iteraciones.
    """
    T0, T1, T2, T3 = constants.T0, constants.T1, constants.T2, constants.T3
    if theorem in (TheoremTag.THM1, TheoremTag.THM3):
        horizon = T0
    elif theorem in (TheoremTag.THM1_JOINT, TheoremTag.THM3_JOINT):
        horizon = None if T0 is None or T1 is None else max(T0, T1)
    else:
        horizon = None if T2 is None or T3 is None else max(T2, T3)
    if horizon is not None and theorem in (TheoremTag.THM1, TheoremTag.THM1_JOINT, TheoremTag.THM2):
        horizon = float(iteration_count(horizon))
    if theorem is TheoremTag.COR1:
        return horizon, [T2, T3]
    sources = 2 if theorem in (TheoremTag.THM2, TheoremTag.THM4) else 1
    return horizon, [horizon] * sources


# ----------------------------------------------------------------------
# Ensayos
# ----------------------------------------------------------------------

def _drawers(scenario: Scenario, trial: int) -> List:
    config = scenario.config
    streams = {"x": STREAM_H1, "y": STREAM_H2} if config.variant.is_coupled else {"y": STREAM_H1}
    drawers = []
    for role in _roles(config):
        spec = scenario.noise_specs.get(role)
        if spec is None or spec.is_zero:
            drawers.append(None)
            continue
        seed_stream = SeedStream(config.seed, trial, streams[role])
        threshold = scenario.clip_thresholds.get(role)
        if config.variant.is_discrete:
            drawers.append(NoiseDrawer(spec, seed_stream, threshold))
        else:
            drawers.append(PathNoiseDrawer(spec, seed_stream, config.dt, threshold))
    return drawers


def simulate_trial(scenario: Scenario, trial: int) -> Trajectory:
    """Simula el ensayo `trial` hasta el horizonte del escenario."""
    config = scenario.config
    drawers = _drawers(scenario, trial)
    if config.variant.is_discrete:
        return run_discrete(scenario.initial, scenario.params, drawers, scenario.steps)
    if config.variant.is_coupled:
        return integrate_IIC(scenario.initial, scenario.params, drawers[0], drawers[1],
                             dt=config.dt, T=scenario.max_time, method=config.method)
    return integrate_IC(scenario.initial, scenario.params, drawers[0], dt=config.dt,
                        T=scenario.max_time, method=config.method)


def _within(value: Optional[float], limit: Optional[float]) -> bool:
    return value is not None and limit is not None and value <= limit + ROUNDING_SLACK


def _tail_holds(trajectory: Trajectory, scenario: Scenario, horizon: float) -> bool:
    mu = scenario.config.mu
    if scenario.config.variant.is_discrete:
        start = int(horizon)
    else:
        hits = np.nonzero(trajectory.times >= horizon - ROUNDING_SLACK)[0]
        if not hits.size:
            return False
        start = int(hits[0])
    return cauchy_tail(trajectory, scenario.params, start, mu).passed


def _event_reached(scenario: Scenario, trajectory: Trajectory, times) -> bool:
    theorem, horizon, constants = scenario.theorem, scenario.event_horizon, scenario.constants
    if horizon is None:
        return False
    if theorem in (TheoremTag.THM1, TheoremTag.THM1_JOINT):
        reached = _within(times.y_step, horizon)
    elif theorem is TheoremTag.THM2:
        reached = _within(times.x_step, horizon) and _within(times.y_step, horizon)
    elif theorem in (TheoremTag.THM3, TheoremTag.THM3_JOINT):
        reached = _within(times.y_time, horizon)
    elif theorem is TheoremTag.THM4:
        reached = _within(times.x_time, horizon) or _within(times.y_time, horizon)
    else:
        reached = _within(times.x_time, constants.T2) and _within(times.y_time, constants.T3)
    if reached and theorem in (TheoremTag.THM1_JOINT, TheoremTag.THM3_JOINT):
        reached = _tail_holds(trajectory, scenario, horizon)
    return reached


def _inside_event(scenario: Scenario, trajectory: Trajectory) -> bool:
    """Todo el ruido aplicado hasta el horizonte quedó bajo ℋ·objetivo (sin recortar)."""
    thresholds = scenario.event_thresholds
    names = ["F1", "F2"] if scenario.config.variant.is_coupled else ["F"]
    for column, (name, horizon) in enumerate(zip(names, scenario.source_horizons)):
        threshold = thresholds.get(name)
        if threshold is None or horizon is None:
            return False
        if scenario.config.variant.is_discrete:
            mask = trajectory.steps < horizon
        else:
            mask = trajectory.times <= horizon + ROUNDING_SLACK
        if np.any(trajectory.noise_norms[mask, column] > threshold):
            return False
    return True


def execute_trial(scenario: Scenario, trial: int) -> TrialResult:
    """
    Ejecuta un ensayo y lo resume.

    Una explosión o un estado no finito se registra como ensayo fallido.
    """
    try:
        trajectory = simulate_trial(scenario, trial)
    except DomainError as e:
        return TrialResult(trial=trial, seed=scenario.config.seed, failed=True, diagnostic=str(e))
    return summarize_trial(scenario, trial, trajectory)


def summarize_trial(scenario: Scenario, trial: int, trajectory: Trajectory) -> TrialResult:
    config = scenario.config
    result = TrialResult(trial=trial, seed=config.seed)
    times = detect_emergence(trajectory, config.mu if config.variant.is_coupled else None, config.nu)
    result.y_step, result.y_time = times.y_step, times.y_time
    result.x_step, result.x_time = times.x_step, times.x_time
    result.event_reached = _event_reached(scenario, trajectory, times)
    result.inside_event = _inside_event(scenario, trajectory)
    result.clipped_steps = int(np.count_nonzero(trajectory.clipped))
    result.j_violations = trajectory.j_violations
    result.terminal_norm_x = float(trajectory.norm_x[-1])
    result.terminal_norm_y = float(trajectory.norm_y[-1])
    if trajectory.aborted:
        result.failed = True
        result.diagnostic = trajectory.aborted
    if scenario.certified and trajectory.conditioned and not trajectory.aborted:
        report = verify_trajectory(trajectory, scenario.constants, scenario.params)
        result.envelope_checked = not report.skipped
        result.envelope_violations = report.violations
    if result.clipped_steps:
        logger.debug("Ensayo %d: %d pasos recortados", trial, result.clipped_steps)
    return result


class HarnessService:
    """
    Servicio del arnés: construcción de escenarios, ensayos, Monte Carlo y barridos.
    """

    def __init__(self, noise_service: NoiseService, exporter: Optional[ResultExporter] = None,
                 config_parser: Optional[ConfigParser] = None, max_workers: int = 1):
        """
        Inicializa el servicio con sus dependencias.

        Args:
            noise_service: Servicio para evaluar F y F(x, T)
            exporter: Escritor de trazas y resúmenes (opcional)
            config_parser: Función documento JSON → ScenarioConfig (necesaria para barridos)
            max_workers: Procesos para Monte Carlo (1 = secuencial)
        """
        self.noise_service = noise_service
        self.exporter = exporter
        self.config_parser = config_parser
        self.max_workers = max(1, int(max_workers))

    def _cdf(self, spec):
        if spec is None or spec.is_zero:
            return None
        if isinstance(spec, PathNoiseSpec):
            return lambda x, T: self.noise_service.path_bound(spec, x, T)
        return lambda x: self.noise_service.norm_cdf(spec, x)

    def build_scenario(self, config: ScenarioConfig) -> Scenario:
        """
        Construye un escenario ejecutable.

        El escenario se construye aunque las hipótesis no se cumplan; en ese
        caso queda marcado como no certificado y los motivos van en `notes`.

        Raises:
            ConfigurationError: Si la configuración es incoherente
        """
        variant = config.variant
        if config.k < 2:
            raise ConfigurationError("k", "se requiere k ≥ 2")
        if config.trials < 1:
            raise ConfigurationError("trials", "se requiere N ≥ 1")
        if config.nu is None:
            raise ConfigurationError("targets.nu", "valor obligatorio")
        if config.mu is None and (variant.is_coupled or config.event is EventKind.JOINT):
            raise ConfigurationError("targets.mu", "valor obligatorio para este evento")
        if config.method == "rk4" and any(cfg.kind != "zero" for cfg in config.noise.values()):
            raise ConfigurationError("method", "RK4 solo se ofrece para el campo sin ruido")

        params = config.params
        try:
            initial = initial_state(config)
            constants = compute_constants(initial, params, config.mu, config.nu)
        except DomainError as e:
            raise ConfigurationError("initial", str(e))
        operator_report = verify_operator_hypotheses(initial, params)
        hypotheses = check_hypotheses(initial, params, constants)

        noise_specs = {role: _noise_spec(config, role, cfg) for role, cfg in config.noise.items()}
        cdfs = [self._cdf(noise_specs.get(role)) for role in _roles(config)]
        theorem = default_theorem(variant, cdfs, joint=config.event is EventKind.JOINT)
        bound = probability_bound(theorem, constants, cdfs, checks=hypotheses.checks)

        clip_thresholds = {}
        for role, cfg in config.noise.items():
            clip_thresholds[role] = _clip_threshold(constants, role, variant.is_coupled) if cfg.clip else None

        event_horizon, source_horizons = _event_horizons(theorem, constants)
        if variant.is_discrete:
            steps = config.horizon
            if steps is None:
                steps = max(1, HORIZON_FACTOR * int(event_horizon)) if event_horizon is not None \
                    else FALLBACK_STEPS
            max_time = None
        else:
            steps = None
            max_time = config.max_time
            if max_time is None:
                max_time = max(config.dt, HORIZON_FACTOR * event_horizon) if event_horizon is not None \
                    else FALLBACK_TIME

        notes = list(constants.reasons)
        if not operator_report.passed:
            failed = [check.name for check in operator_report.checks if not check.passed]
            notes.append(f"hipótesis de operador no satisfechas en el estado inicial: {', '.join(failed)}")
        if not hypotheses.passed:
            failed = [check.name for check in hypotheses.checks if not check.passed] or [hypotheses.case.value]
            notes.append(f"hipótesis de {hypotheses.theorem} no satisfechas: {', '.join(failed)}")
        if any(cfg.clip for cfg in config.noise.values()):
            notes.append("ruido recortado: solo se comprueban envolventes, no la cota de probabilidad")

        scenario = Scenario(
            config=config, params=params, initial=initial, constants=constants,
            hypotheses=hypotheses, operator_report=operator_report, theorem=theorem, bound=bound,
            noise_specs=noise_specs, clip_thresholds=clip_thresholds,
            event_thresholds=dict(bound.thresholds), steps=steps, max_time=max_time,
            event_horizon=event_horizon, source_horizons=source_horizons, notes=notes,
        )
        if not scenario.certified:
            logger.warning("Escenario '%s' no certificado: %s", config.name, "; ".join(notes))
        return scenario

    def simulate(self, scenario: Scenario, trial: int = 0) -> Tuple[TrialResult, Trajectory]:
        """Ejecuta un ensayo y devuelve también la trayectoria completa."""
        trajectory = simulate_trial(scenario, trial)
        return summarize_trial(scenario, trial, trajectory), trajectory

    def run_trial(self, scenario: Scenario, trial: int) -> TrialResult:
        return execute_trial(scenario, trial)

    def _results(self, scenario: Scenario, trials: int, workers: int) -> List[TrialResult]:
        progress_step = max(1, trials // 10)
        if workers > 1:
            try:
                with ProcessPoolExecutor(max_workers=workers) as executor:
                    chunksize = max(1, trials // (4 * workers))
                    results = []
                    # map conserva el orden de los índices
                    for result in executor.map(execute_trial, repeat(scenario), range(trials),
                                               chunksize=chunksize):
                        results.append(result)
                        if len(results) % progress_step == 0:
                            logger.info("Monte Carlo %s: %d/%d ensayos", scenario.config.name, len(results), trials)
                    return results
            except Exception as e:
                logger.warning("No se pudo usar el pool de procesos (%s); se ejecuta en secuencia", e)
        results = []
        for trial in range(trials):
            results.append(execute_trial(scenario, trial))
            if (trial + 1) % progress_step == 0:
                logger.info("Monte Carlo %s: %d/%d ensayos", scenario.config.name, trial + 1, trials)
        return results

    def monte_carlo(self, scenario: Scenario, trials: Optional[int] = None,
                    workers: Optional[int] = None) -> MonteCarloSummary:
        """
        Estima la probabilidad del evento del teorema y la compara con su cota.

        Args:
            scenario: Escenario construido
            trials: Número de ensayos N (por defecto el de la configuración)
            workers: Procesos (por defecto los del servicio)

        Returns:
            MonteCarloSummary; el veredicto es 'violated' solo si la cota
            supera el extremo superior del intervalo de Wilson
        """
        n = scenario.config.trials if trials is None else int(trials)
        if n < 1:
            raise ConfigurationError("trials", f"se requiere N ≥ 1, recibido {n}")
        results = self._results(scenario, n, workers or self.max_workers)
        successes = sum(1 for result in results if result.event_reached)
        wilson_lo, wilson_hi = wilson_interval(successes, n)

        bound = scenario.bound.probability
        reasons = list(scenario.notes) + [r for r in scenario.bound.reasons if r not in scenario.notes]
        clipped = any(cfg.clip for cfg in scenario.config.noise.values())
        if not scenario.certified or bound is None or not scenario.bound.applicable or clipped:
            verdict = Verdict.INAPPLICABLE
        elif bound > wilson_hi:
            verdict = Verdict.VIOLATED
            logger.warning("Cota %.6g mayor que el extremo superior de Wilson %.6g en '%s'",
                           bound, wilson_hi, scenario.config.name)
        else:
            verdict = Verdict.RESPECTED

        summary = MonteCarloSummary(
            scenario=scenario.config.name,
            theorem=scenario.theorem,
            trials=n,
            successes=successes,
            wilson_lo=wilson_lo,
            wilson_hi=wilson_hi,
            bound=bound,
            verdict=verdict,
            event_horizon=scenario.event_horizon,
            inside_event=sum(1 for result in results if result.inside_event),
            failures=sum(1 for result in results if result.failed),
            envelope_violations=sum(result.envelope_violations for result in results),
            reasons=reasons,
            metadata=self._metadata(scenario, n),
        )
        logger.info("Monte Carlo %s: %d/%d éxitos, cota %s, veredicto %s", scenario.config.name,
                    successes, n, json_number(bound), verdict.value)
        return summary

    def _metadata(self, scenario: Scenario, trials: int) -> dict:
        config = scenario.config
        return {
            "seed": config.seed,
            "preset": config.preset,
            "variant": config.variant.value,
            "k": config.k,
            "d": config.d,
            "steps": scenario.steps,
            "max_time": json_number(scenario.max_time),
            "dt": None if config.variant.is_discrete else config.dt,
            "confidence": WILSON_CONFIDENCE,
            "artifact_decisions": {
                "note": "k, d, N, semillas, radios y horizontes son decisiones de escala de escritorio, "
                        "no valores del modelo",
                "trials": trials,
                "horizon_rule": f"{HORIZON_FACTOR}·horizonte del teorema" if config.horizon is None
                and config.max_time is None else "configurado",
                "initial_state": config.initial.kind,
            },
        }

    def sweep(self, base_raw: dict, grid: Dict[str, Sequence[Any]],
              trials: Optional[int] = None) -> Tuple[List[Dict[str, Any]], List[str]]:
        """
        Monte Carlo en cada punto del producto cartesiano de la malla.

        Args:
            base_raw: Documento de configuración base
            grid: {ruta.con.puntos: [valores]}
            trials: N por punto (por defecto el de cada configuración)

        Returns:
            (filas, columnas); una malla vacía da cero filas y solo la cabecera
        """
        if self.config_parser is None:
            raise DomainError("El barrido necesita un config_parser")
        keys = list(grid)
        columns = keys + SWEEP_COLUMNS
        rows: List[Dict[str, Any]] = []
        if not keys or any(len(grid[key]) == 0 for key in keys):
            return rows, columns
        for values in itertools.product(*(grid[key] for key in keys)):
            raw = base_raw
            for key, value in zip(keys, values):
                raw = set_path(raw, key, value)
            row = dict(zip(keys, values))
            try:
                scenario = self.build_scenario(self.config_parser(raw))
                summary = self.monte_carlo(scenario, trials)
                constants = scenario.constants
                horizon = constants.T0 if not scenario.config.variant.is_coupled else (
                    None if constants.T2 is None or constants.T3 is None else max(constants.T2, constants.T3))
                row.update({
                    "T": json_number(horizon),
                    "empirical": summary.empirical,
                    "wilson_lo": summary.wilson_lo,
                    "wilson_hi": summary.wilson_hi,
                    "bound": json_number(summary.bound),
                    "verdict": summary.verdict.value,
                    "error": "",
                })
            except ValueError as e:
                logger.info("Punto del barrido %s con error: %s", row, e)
                row.update({column: "" for column in SWEEP_COLUMNS})
                row["error"] = str(e)
            rows.append(row)
        return rows, columns

    # ------------------------------------------------------------------
    # Exportación
    # ------------------------------------------------------------------

    def export_trace(self, path: str, scenario: Scenario, trajectory: Trajectory) -> None:
        self._require_exporter().write_trace(path, trace_rows(trajectory), trace_columns(scenario.config))

    def export_summary(self, path: str, payload: Dict[str, Any]) -> None:
        self._require_exporter().write_summary(path, payload)

    def export_sweep(self, path: str, rows: List[Dict[str, Any]], columns: Sequence[str]) -> None:
        self._require_exporter().write_sweep(path, rows, columns)

    def _require_exporter(self) -> ResultExporter:
        if self.exporter is None:
            raise DomainError("No hay un exportador de resultados configurado")
        return self.exporter
