# -*- coding: utf-8 -*-
"""
Servicio de ruido.

Las muestras son funciones deterministas de (ley, flujo de semillas, índice):
cada extracción usa su propia SeedSequence con spawn_key (ensayo, flujo, t),
de modo que los ensayos son independientes y reproducibles por separado.

Flujos: 0 = H / H₁, 1 = H₂, 2 = generador del estado inicial.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.special import gammainc
from scipy.stats import beta as beta_distribution

from noisy_emergence.domain.errors import DomainError
from noisy_emergence.domain.models.noise import (
    CdfMethod,
    CdfTable,
    NoiseDraw,
    NoiseKind,
    NoiseSpec,
    NormCdf,
    PathNoiseSpec,
)
from noisy_emergence.domain.ports.cdf_table_repository import CdfTableRepository, InMemoryCdfTableRepository
from noisy_emergence.domain.services.quotient_space import array_norm, embed_intrinsic

logger = logging.getLogger(__name__)

STREAM_H1 = 0
STREAM_H2 = 1
STREAM_INITIAL = 2

# Confianza de la cota inferior de Clopper–Pearson para la opción OU
OU_CONFIDENCE = 0.99
# Confianza de la banda DKW de las tablas Monte Carlo
TABLE_CONFIDENCE = 0.95
TABLE_POINTS = 1025
CHUNK = 100_000


@dataclass(frozen=True)
class SeedStream:
    """Flujo de semillas de un ensayo: (semilla maestra, ensayo, flujo)."""

    master_seed: int
    trial: int = 0
    stream: int = STREAM_H1

    def generator(self, t: int) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.master_seed, spawn_key=(self.trial, self.stream, int(t)))
        return np.random.default_rng(sequence)


def _draw_intrinsic(spec: NoiseSpec, rng: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
    """Muestra z ∈ ℝ^m (o un bloque size × m) de la ley base."""
    m = spec.dimension
    shape = (m,) if size is None else (size, m)
    if spec.kind is NoiseKind.ZERO:
        return np.zeros(shape)
    if spec.kind is NoiseKind.GAUSSIAN:
        return spec.sigma * rng.standard_normal(shape)
    if spec.kind is NoiseKind.CUBE:
        half = 0.5 * spec.radius
        return rng.uniform(-half, half, shape)
    direction = rng.standard_normal(shape)
    norms = np.linalg.norm(direction, axis=-1, keepdims=True)
    radii = spec.radius * rng.random(shape[:-1] + (1,)) ** (1.0 / m)
    return direction / norms * radii


def embed(spec: NoiseSpec, z: np.ndarray) -> np.ndarray:
    """Lleva z ∈ ℝ^m al espacio objetivo k × d conservando la norma."""
    if spec.quotient:
        return embed_intrinsic(z, spec.k, spec.d, spec.inner)
    return np.asarray(z, dtype=float).reshape(spec.k, spec.d)


def target_norm(spec: NoiseSpec, value: np.ndarray) -> float:
    if spec.quotient:
        return array_norm(value, spec.inner, centered=True)
    return float(np.linalg.norm(value))


def sample(spec: NoiseSpec, seed_stream: SeedStream, t: int) -> np.ndarray:
    """
    Muestra H[t] en el espacio objetivo (centrada si el objetivo es un cociente).

    Args:
        spec: Ley del ruido
        seed_stream: Flujo de semillas del ensayo
        t: Índice del paso

    Returns:
        Array k × d
    """
    if spec.is_zero:
        return np.zeros((spec.k, spec.d))
    return embed(spec, _draw_intrinsic(spec, seed_stream.generator(t)))


def clip(value: np.ndarray, norm: float, cap: float) -> Tuple[np.ndarray, bool]:
    """Reescala `value` a la frontera ||·|| = cap si la supera."""
    if norm <= cap:
        return value, False
    if cap <= 0.0 or norm == 0.0:
        return np.zeros_like(value), True
    return value * (cap / norm), True


def clopper_pearson_lower(successes: int, trials: int, confidence: float = OU_CONFIDENCE) -> float:
    """Cota inferior unilateral exacta de una proporción binomial."""
    if successes <= 0:
        return 0.0
    return float(beta_distribution.ppf(1.0 - confidence, successes, trials - successes + 1))


class NoiseDrawer:
    """
    Fuente de ruido de un sistema discreto para un ensayo.

    Si `clip_threshold` no es None, cada muestra se recorta a
    ||H|| ≤ clip_threshold·(norma de referencia).
    """

    def __init__(self, spec: NoiseSpec, seed_stream: SeedStream, clip_threshold: Optional[float] = None):
        self.spec = spec
        self.seed_stream = seed_stream
        self.clip_threshold = clip_threshold

    @property
    def is_zero(self) -> bool:
        return self.spec.is_zero

    def draw(self, t: int, reference_norm: float = 0.0) -> NoiseDraw:
        value = sample(self.spec, self.seed_stream, t)
        norm = target_norm(self.spec, value)
        if self.clip_threshold is None:
            return NoiseDraw(value, norm, False)
        clipped_value, clipped = clip(value, norm, self.clip_threshold * reference_norm)
        return NoiseDraw(clipped_value, norm, clipped)


class PathNoiseDrawer:
    """
    Fuente de ruido ε·H(t) de un sistema continuo, evaluada en la malla t_n = n·dt.

    El proceso congelado a trozos se evalúa por celdas ⌊t/Δ⌋ en cualquier
    orden; el proceso OU se avanza de forma exacta (AR(1)) y debe recorrerse
    en orden creciente de n.
    """

    def __init__(self, spec: PathNoiseSpec, seed_stream: SeedStream, dt: float,
                 clip_threshold: Optional[float] = None):
        if not dt > 0:
            raise DomainError(f"dt debe ser positivo, recibido {dt}")
        self.spec = spec
        self.seed_stream = seed_stream
        self.dt = dt
        self.clip_threshold = clip_threshold
        self._cell: Optional[int] = None
        self._cell_value: Optional[np.ndarray] = None
        self._ou_rng: Optional[np.random.Generator] = None
        self._ou_state: Optional[np.ndarray] = None
        self._ou_index = -1

    @property
    def is_zero(self) -> bool:
        return self.spec.is_zero

    def _frozen_value(self, n: int) -> np.ndarray:
        cell = int(math.floor(n * self.dt / self.spec.refresh + 1e-9))
        if cell != self._cell:
            self._cell = cell
            self._cell_value = sample(self.spec.base, self.seed_stream, cell)
        return self._cell_value

    def _ou_value(self, n: int) -> np.ndarray:
        base = self.spec.base
        if self._ou_rng is None:
            self._ou_rng = self.seed_stream.generator(0)
            self._ou_state = _draw_intrinsic(base, self._ou_rng)
            self._ou_index = 0
        if n < self._ou_index:
            raise DomainError("El proceso OU debe evaluarse en orden creciente")
        decay = math.exp(-self.spec.ou_rate * self.dt)
        spread = base.sigma * math.sqrt(1.0 - decay * decay)
        while self._ou_index < n:
            self._ou_state = decay * self._ou_state + spread * self._ou_rng.standard_normal(base.dimension)
            self._ou_index += 1
        return embed(base, self._ou_state)

    def draw(self, n: int, reference_norm: float = 0.0) -> NoiseDraw:
        if self.spec.is_zero:
            value = np.zeros((self.spec.base.k, self.spec.base.d))
        elif self.spec.is_ou:
            value = self.spec.amplitude * self._ou_value(n)
        else:
            value = self.spec.amplitude * self._frozen_value(n)
        norm = target_norm(self.spec.base, value)
        if self.clip_threshold is None:
            return NoiseDraw(value, norm, False)
        clipped_value, clipped = clip(value, norm, self.clip_threshold * reference_norm)
        return NoiseDraw(clipped_value, norm, clipped)


class NoiseService:
    """
    Servicio para evaluar F(x) = P(||H|| ≤ x) y la cota de trayectorias F(x, T).
    """

    def __init__(self, table_repository: Optional[CdfTableRepository] = None,
                 mc_samples: int = 1_000_000, mc_seed: int = 20240101):
        """
        Inicializa el servicio con sus dependencias.

        Args:
            table_repository: Almacén de tablas Monte Carlo (en memoria si no se proporciona)
            mc_samples: Muestras por tabla Monte Carlo
            mc_seed: Semilla de las tablas y de la cota OU
        """
        self.table_repository = table_repository or InMemoryCdfTableRepository()
        self.mc_samples = mc_samples
        self.mc_seed = mc_seed
        self._ou_maxima: Dict[tuple, np.ndarray] = {}

    # ------------------------------------------------------------------
    # F(x)
    # ------------------------------------------------------------------

    def cdf_table(self, spec: NoiseSpec) -> CdfTable:
        """
        Tabla Monte Carlo de F para leyes sin forma cerrada (cubo).

        Se busca primero en el almacén por hash de la ley; si no está se
        calcula por bloques y se guarda.
        """
        spec_hash = spec.spec_hash()
        cached = self.table_repository.load(spec_hash, self.mc_samples, self.mc_seed)
        if cached is not None:
            logger.debug("Tabla CDF %s recuperada de la caché", spec_hash)
            return cached
        logger.info("Calculando tabla CDF %s con %d muestras", spec_hash, self.mc_samples)
        rng = np.random.default_rng(np.random.SeedSequence(self.mc_seed))
        norms = []
        remaining = self.mc_samples
        while remaining > 0:
            size = min(CHUNK, remaining)
            norms.append(np.linalg.norm(_draw_intrinsic(spec, rng, size), axis=1))
            remaining -= size
        ordered = np.sort(np.concatenate(norms))
        support = 0.5 * spec.radius * math.sqrt(spec.dimension) if spec.kind is NoiseKind.CUBE \
            else float(ordered[-1])
        xs = np.linspace(0.0, support, TABLE_POINTS)
        values = np.searchsorted(ordered, xs, side='right') / float(len(ordered))
        values[-1] = 1.0
        half_width = math.sqrt(math.log(2.0 / (1.0 - TABLE_CONFIDENCE)) / (2.0 * len(ordered)))
        table = CdfTable(xs=xs, values=values, half_width=half_width,
                         samples=self.mc_samples, seed=self.mc_seed)
        self.table_repository.save(spec_hash, table)
        return table

    def evaluate_cdf(self, spec: NoiseSpec, x: float) -> NormCdf:
        """
        F(x) con el método usado y su incertidumbre.

        Bola: min(1, (x/r)^m). Gaussiana: P(σχ_m ≤ x) por la gamma incompleta
        regularizada. Cubo: tabla Monte Carlo.
        """
        if not math.isfinite(x) and x > 0:
            return NormCdf(spec, CdfMethod.CLOSED_FORM, x, 1.0)
        if math.isnan(x):
            raise DomainError("F(x) no está definida para x = NaN")
        if x < 0:
            return NormCdf(spec, CdfMethod.CLOSED_FORM, x, 0.0)
        if spec.kind is NoiseKind.ZERO:
            return NormCdf(spec, CdfMethod.CLOSED_FORM, x, 1.0)
        m = spec.dimension
        if spec.kind is NoiseKind.BALL:
            return NormCdf(spec, CdfMethod.CLOSED_FORM, x, min(1.0, (x / spec.radius) ** m))
        if spec.kind is NoiseKind.GAUSSIAN:
            value = float(gammainc(0.5 * m, x * x / (2.0 * spec.sigma ** 2)))
            return NormCdf(spec, CdfMethod.QUADRATURE, x, value)
        table = self.cdf_table(spec)
        return NormCdf(spec, CdfMethod.MONTE_CARLO, x, table.evaluate(x),
                       half_width=table.half_width, samples=table.samples, seed=table.seed)

    def norm_cdf(self, spec: NoiseSpec, x: float) -> float:
        """F(x) = P(||H|| ≤ x); 0 para x < 0."""
        return self.evaluate_cdf(spec, x).value

    # ------------------------------------------------------------------
    # F(x, T)
    # ------------------------------------------------------------------

    def _ou_running_maxima(self, spec: PathNoiseSpec, steps: int) -> np.ndarray:
        """
        Máximo de ||H|| sobre la malla 0..steps para cada trayectoria simulada.

        Las trayectorias usan números aleatorios comunes: las primeras n
        extracciones son las mismas para cualquier horizonte.
        """
        key = (spec, steps)
        if key in self._ou_maxima:
            return self._ou_maxima[key]
        base = spec.base
        decay = math.exp(-spec.ou_rate * spec.grid_step)
        spread = base.sigma * math.sqrt(1.0 - decay * decay)
        chunk_size = 2_000
        maxima = []
        for chunk, start in enumerate(range(0, spec.mc_paths, chunk_size)):
            size = min(chunk_size, spec.mc_paths - start)
            rng = np.random.default_rng(np.random.SeedSequence(self.mc_seed, spawn_key=(chunk,)))
            state = base.sigma * rng.standard_normal((size, base.dimension))
            running = np.linalg.norm(state, axis=1)
            for _ in range(steps):
                state = decay * state + spread * rng.standard_normal((size, base.dimension))
                running = np.maximum(running, np.linalg.norm(state, axis=1))
            maxima.append(running)
        result = np.concatenate(maxima)
        self._ou_maxima[key] = result
        return result

    def path_bound(self, spec: PathNoiseSpec, x: float, T: float) -> float:
        """
        Cota inferior F(x, T) de P(max_{0≤t≤T} ||ε·H(t)|| ≤ x).

        Proceso congelado: F(x/ε)^{max(1, ⌈T/Δ⌉)}, exacta. Proceso OU: cota
        inferior de Clopper–Pearson al 99 % sobre trayectorias simuladas.

        Args:
            spec: Proceso de ruido
            x: Umbral de la norma
            T: Horizonte (T ≥ 0)
        """
        if T < 0:
            raise DomainError(f"El horizonte T debe ser ≥ 0, recibido {T}")
        if spec.is_zero:
            return 1.0 if x >= 0 else 0.0
        scaled = x / spec.amplitude
        if spec.is_ou:
            if scaled < 0:
                return 0.0
            steps = max(1, int(math.ceil(T / spec.grid_step - 1e-9)))
            maxima = self._ou_running_maxima(spec, steps)
            successes = int(np.count_nonzero(maxima <= scaled))
            return clopper_pearson_lower(successes, len(maxima))
        cells = max(1, int(math.ceil(T / spec.refresh - 1e-9)))
        return self.norm_cdf(spec.base, scaled) ** cells
