# -*- coding: utf-8 -*-
"""
Cargador de escenarios desde ficheros de configuración JSON.

Esquema (todas las claves son opcionales salvo que el preset no las dé;
las claves desconocidas se rechazan indicando su ruta):

    {
      "name": "mi-escenario",
      "preset": "flocking-2d",
      "variant": "I(D)" | "II(D)" | "I(C)" | "II(C)",
      "k": 10, "d": 2,
      "inner": "pairwise" | "euclidean",
      "x_is_quotient": true,
      "initial": {"kind": "explicit" | "random_box", "x": [[...]], "y": [[...]],
                  "x_scale": 1.0, "y_scale": 0.1, "y_mean": [...]},
      "kernel" | "kernel_x" | "kernel_y": {"kind": "cucker_smale" | "cucker_smale_squared" | "table",
                                           "scale": 1.0, "exponent": 0.5, "table": [[r, v], ...]},
      "params": {"h", "h_1", "h_2", "coupling", "coupling_1", "coupling_2",
                 "beta", "beta_1", "beta_2",
                 "j": {"kind": "identity" | "scaled", "factor", "C", "gamma", "delta"}},
      "noise": {"x" | "y": {"kind": "zero" | "ball" | "cube" | "gaussian", "radius", "sigma",
                            "refresh", "ou_rate", "amplitude", "mc_paths", "grid_step", "clip"}},
      "targets": {"mu": 0.1, "nu": 0.05},
      "horizon": 400, "max_time": 5.0, "dt": 0.01, "method": "euler" | "rk4",
      "trials": 1000, "seed": 1, "event": "emergence" | "joint",
      "outputs": {"trace": "...", "summary": "...", "sweep": "..."}
    }

Con núcleos de Cucker–Smale las constantes de acoplamiento que falten se
derivan como k·escala y los exponentes como el del núcleo.
"""
import json
import math
from pathlib import Path
from typing import Any, Dict, Optional, Union

from noisy_emergence.domain.errors import ConfigurationError, DomainError
from noisy_emergence.domain.models.coupling import KernelKind, KernelSpec
from noisy_emergence.domain.models.quotient import InnerProduct
from noisy_emergence.domain.models.scenario import (
    EventKind,
    InitialStateConfig,
    NoiseConfig,
    ScenarioConfig,
    as_tuple_matrix,
)
from noisy_emergence.domain.models.system import IdentityJ, ScaledJ, SystemParams, SystemVariant
from noisy_emergence.domain.services.scenario_presets import PRESETS, get_preset, merge
from noisy_emergence.infrastructure.config import settings

TOP_KEYS = {
    "name", "preset", "variant", "k", "d", "inner", "x_is_quotient", "initial", "kernel",
    "kernel_x", "kernel_y", "params", "noise", "targets", "horizon", "max_time", "dt",
    "method", "trials", "seed", "event", "outputs",
}
INITIAL_KEYS = {"kind", "x", "y", "x_scale", "y_scale", "y_mean"}
KERNEL_KEYS = {"kind", "scale", "exponent", "table"}
PARAMS_KEYS = {"h", "h_1", "h_2", "coupling", "coupling_1", "coupling_2", "beta", "beta_1", "beta_2", "j"}
J_KEYS = {"kind", "factor", "C", "gamma", "delta"}
NOISE_KEYS = {"kind", "radius", "sigma", "refresh", "ou_rate", "amplitude", "mc_paths", "grid_step", "clip"}
TARGET_KEYS = {"mu", "nu"}
OUTPUT_KEYS = {"trace", "summary", "sweep"}


def _check_keys(section: Any, allowed: set, path: str) -> dict:
    if section is None:
        return {}
    if not isinstance(section, dict):
        raise ConfigurationError(path or "<raíz>", "se esperaba un objeto JSON")
    for key in section:
        if key not in allowed:
            prefix = f"{path}." if path else ""
            raise ConfigurationError(f"{prefix}{key}", "clave desconocida")
    return section


def _number(value: Any, path: str, positive: bool = False, nonnegative: bool = False,
            integer: bool = False, optional: bool = False) -> Optional[float]:
    if value is None:
        if optional:
            return None
        raise ConfigurationError(path, "valor obligatorio")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(path, f"se esperaba un número, recibido {value!r}")
    if not math.isfinite(float(value)):
        raise ConfigurationError(path, "el valor debe ser finito")
    if integer and float(value) != int(value):
        raise ConfigurationError(path, f"se esperaba un entero, recibido {value!r}")
    if positive and not value > 0:
        raise ConfigurationError(path, f"debe ser positivo, recibido {value!r}")
    if nonnegative and not value >= 0:
        raise ConfigurationError(path, f"debe ser ≥ 0, recibido {value!r}")
    return int(value) if integer else float(value)


def _choice(value: Any, enum_type, path: str):
    try:
        return enum_type(value)
    except ValueError:
        allowed = ", ".join(item.value for item in enum_type)
        raise ConfigurationError(path, f"valor {value!r} no permitido (opciones: {allowed})")


def _kernel(section: Any, path: str) -> KernelSpec:
    section = _check_keys(section, KERNEL_KEYS, path)
    if not section:
        raise ConfigurationError(path, "núcleo obligatorio para esta variante")
    kind = _choice(section.get("kind", "cucker_smale"), KernelKind, f"{path}.kind")
    table = section.get("table") or ()
    if kind is KernelKind.TABLE and not table:
        raise ConfigurationError(f"{path}.table", "un núcleo tabulado necesita pares [r, valor]")
    try:
        return KernelSpec(
            kind=kind,
            scale=_number(section.get("scale", 1.0), f"{path}.scale", positive=True),
            exponent=_number(section.get("exponent", 0.0), f"{path}.exponent", nonnegative=True),
            table=tuple(tuple(pair) for pair in table),
        )
    except (DomainError, TypeError) as e:
        raise ConfigurationError(path, str(e))


def _derived_constant(kernel: KernelSpec, k: int, discrete: bool, path: str):
    """(k·escala, exponente) para núcleos de Cucker–Smale con la forma de la variante."""
    if kernel.kind is KernelKind.TABLE:
        raise ConfigurationError(path, "con un núcleo tabulado la constante de acoplamiento debe darse explícitamente")
    expected = KernelKind.CUCKER_SMALE if discrete else KernelKind.CUCKER_SMALE_SQUARED
    if kernel.kind is not expected:
        raise ConfigurationError(
            path, f"la forma del núcleo ({kernel.kind.value}) no corresponde a la variante; "
                  f"use {expected.value} o dé la constante explícitamente"
        )
    return k * kernel.scale, kernel.exponent


def _j_operator(section: Any, path: str):
    section = _check_keys(section, J_KEYS, path)
    kind = section.get("kind", "identity")
    C = _number(section.get("C", 1.0), f"{path}.C", positive=True)
    gamma = _number(section.get("gamma", 0.0), f"{path}.gamma", nonnegative=True)
    delta = _number(section.get("delta", 1.0), f"{path}.delta", positive=True)
    try:
        if kind == "identity":
            if "factor" in section:
                raise ConfigurationError(f"{path}.factor", "solo se admite con kind='scaled'")
            return IdentityJ(C=C, gamma=gamma, delta=delta)
        if kind == "scaled":
            return ScaledJ(_number(section.get("factor"), f"{path}.factor"), C=C, gamma=gamma, delta=delta)
    except DomainError as e:
        raise ConfigurationError(path, str(e))
    raise ConfigurationError(f"{path}.kind", f"valor {kind!r} no permitido (opciones: identity, scaled)")


def _noise(section: Any, path: str) -> NoiseConfig:
    section = _check_keys(section, NOISE_KEYS, path)
    kind = section.get("kind", "zero")
    if kind not in ("zero", "ball", "cube", "gaussian"):
        raise ConfigurationError(f"{path}.kind", f"valor {kind!r} no permitido (opciones: zero, ball, cube, gaussian)")
    radius = _number(section.get("radius", 0.0), f"{path}.radius", nonnegative=True)
    sigma = _number(section.get("sigma", 0.0), f"{path}.sigma", nonnegative=True)
    # Radio o σ nulos equivalen a ausencia de ruido
    if (kind in ("ball", "cube") and radius == 0.0) or (kind == "gaussian" and sigma == 0.0):
        kind = "zero"
    clip = section.get("clip", False)
    if not isinstance(clip, bool):
        raise ConfigurationError(f"{path}.clip", "se esperaba true o false")
    return NoiseConfig(
        kind=kind,
        radius=radius,
        sigma=sigma,
        refresh=_number(section.get("refresh"), f"{path}.refresh", positive=True, optional=True),
        ou_rate=_number(section.get("ou_rate", 0.0), f"{path}.ou_rate", nonnegative=True),
        amplitude=_number(section.get("amplitude", 1.0), f"{path}.amplitude", positive=True),
        mc_paths=_number(section.get("mc_paths", 10_000), f"{path}.mc_paths", positive=True, integer=True),
        grid_step=_number(section.get("grid_step"), f"{path}.grid_step", positive=True, optional=True),
        clip=clip,
    )


def _initial(section: Any, k: int, d: int, path: str) -> InitialStateConfig:
    section = _check_keys(section, INITIAL_KEYS, path)
    kind = section.get("kind", "random_box")
    if kind not in ("explicit", "random_box"):
        raise ConfigurationError(f"{path}.kind", f"valor {kind!r} no permitido (opciones: explicit, random_box)")
    x = y = None
    if kind == "explicit":
        for name in ("x", "y"):
            if section.get(name) is None:
                raise ConfigurationError(f"{path}.{name}", "obligatorio con kind='explicit'")
        try:
            x = as_tuple_matrix(section["x"])
            y = as_tuple_matrix(section["y"])
        except (TypeError, ValueError) as e:
            raise ConfigurationError(path, f"coordenadas inválidas: {e}")
        for name, values in (("x", x), ("y", y)):
            if len(values) != k or any(len(row) != d for row in values):
                raise ConfigurationError(f"{path}.{name}", f"se esperaba una matriz {k} × {d}")
            if not all(math.isfinite(v) for row in values for v in row):
                raise ConfigurationError(f"{path}.{name}", "todas las coordenadas deben ser finitas")
    y_mean = section.get("y_mean")
    if y_mean is not None:
        if not isinstance(y_mean, list) or len(y_mean) != d:
            raise ConfigurationError(f"{path}.y_mean", f"se esperaba una lista de {d} números")
        y_mean = tuple(_number(v, f"{path}.y_mean") for v in y_mean)
    return InitialStateConfig(
        kind=kind, x=x, y=y,
        x_scale=_number(section.get("x_scale", 1.0), f"{path}.x_scale", nonnegative=True),
        y_scale=_number(section.get("y_scale", 0.1), f"{path}.y_scale", nonnegative=True),
        y_mean=y_mean,
    )


def _params(raw: dict, variant: SystemVariant, k: int, inner: InnerProduct, x_is_quotient: bool) -> SystemParams:
    section = _check_keys(raw.get("params"), PARAMS_KEYS, "params")
    discrete = variant.is_discrete

    def value(name, default=None, **kwargs):
        return _number(section.get(name, default), f"params.{name}", optional=default is None, **kwargs)

    try:
        if variant.is_coupled:
            kernel_x = _kernel(raw.get("kernel_x"), "kernel_x")
            kernel_y = _kernel(raw.get("kernel_y"), "kernel_y")
            if raw.get("kernel") is not None:
                raise ConfigurationError("kernel", "los sistemas II usan kernel_x y kernel_y")
            # II(D): G₁ acompaña a S₁(y) (núcleo g); II(C): K₁ acota ξ_x (núcleo f)
            first, second = (kernel_y, kernel_x) if discrete else (kernel_x, kernel_y)
            first_path, second_path = ("kernel_y", "kernel_x") if discrete else ("kernel_x", "kernel_y")
            coupling_1, beta_1 = value("coupling_1", positive=True), value("beta_1", nonnegative=True)
            if coupling_1 is None:
                coupling_1, derived_beta = _derived_constant(first, k, discrete, first_path)
                beta_1 = derived_beta if beta_1 is None else beta_1
            coupling_2, beta_2 = value("coupling_2", positive=True), value("beta_2", nonnegative=True)
            if coupling_2 is None:
                coupling_2, derived_beta = _derived_constant(second, k, discrete, second_path)
                beta_2 = derived_beta if beta_2 is None else beta_2
            for name in ("h", "coupling", "beta", "j"):
                if name in section:
                    raise ConfigurationError(f"params.{name}", "no se usa en los sistemas II")
            return SystemParams(
                variant=variant, kernel_x=kernel_x, kernel_y=kernel_y,
                coupling_1=coupling_1, coupling_2=coupling_2,
                beta_1=beta_1 or 0.0, beta_2=beta_2 or 0.0,
                h_1=value("h_1", 0.1, nonnegative=True) if discrete else 0.0,
                h_2=value("h_2", 0.1, nonnegative=True) if discrete else 0.0,
                inner=inner, x_is_quotient=x_is_quotient,
            )
        kernel = _kernel(raw.get("kernel"), "kernel")
        for name in ("kernel_x", "kernel_y"):
            if raw.get(name) is not None:
                raise ConfigurationError(name, "los sistemas I usan 'kernel'")
        coupling, beta = value("coupling", positive=True), value("beta", nonnegative=True)
        if coupling is None:
            coupling, derived_beta = _derived_constant(kernel, k, discrete, "kernel")
            beta = derived_beta if beta is None else beta
        for name in ("h_1", "h_2", "coupling_1", "coupling_2", "beta_1", "beta_2"):
            if name in section:
                raise ConfigurationError(f"params.{name}", "no se usa en los sistemas I")
        return SystemParams(
            variant=variant, kernel=kernel, coupling=coupling, beta=beta or 0.0,
            h=value("h", 0.05, nonnegative=True) if discrete else 0.0,
            j_operator=_j_operator(section.get("j"), "params.j"),
            inner=inner, x_is_quotient=x_is_quotient,
        )
    except DomainError as e:
        raise ConfigurationError("params", str(e))


def parse_scenario(raw: dict) -> ScenarioConfig:
    """
    Valida un documento de configuración y construye un ScenarioConfig.

    Args:
        raw: Documento JSON ya decodificado

    Raises:
        ConfigurationError: Si hay claves desconocidas o valores inválidos
    """
    raw = _check_keys(raw, TOP_KEYS, "")
    preset = raw.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigurationError("preset", f"preset desconocido {preset!r} (opciones: {', '.join(sorted(PRESETS))})")
        raw = merge(get_preset(preset), raw)
    if "variant" not in raw:
        raise ConfigurationError("variant", "valor obligatorio (o un preset)")
    variant = _choice(raw["variant"], SystemVariant, "variant")
    k = _number(raw.get("k", 10), "k", integer=True)
    if k < 2:
        raise ConfigurationError("k", f"se requiere k ≥ 2 (el cociente es trivial), recibido {k}")
    d = _number(raw.get("d", 3), "d", positive=True, integer=True)
    inner = _choice(raw.get("inner", "pairwise"), InnerProduct, "inner")
    x_is_quotient = raw.get("x_is_quotient", True)
    if not isinstance(x_is_quotient, bool):
        raise ConfigurationError("x_is_quotient", "se esperaba true o false")

    params = _params(raw, variant, k, inner, x_is_quotient)
    noise_section = raw.get("noise") or {}
    if not isinstance(noise_section, dict):
        raise ConfigurationError("noise", "se esperaba un objeto JSON")
    allowed_roles = {"x", "y"} if variant.is_coupled else {"y"}
    for role in noise_section:
        if role not in allowed_roles:
            raise ConfigurationError(f"noise.{role}", "papel de ruido no válido para esta variante")
    noise = {role: _noise(noise_section[role], f"noise.{role}") for role in sorted(noise_section)}

    targets = _check_keys(raw.get("targets"), TARGET_KEYS, "targets")
    mu = _number(targets.get("mu"), "targets.mu", positive=True, optional=True)
    nu = _number(targets.get("nu"), "targets.nu", positive=True, optional=True)
    event = _choice(raw.get("event", "emergence"), EventKind, "event")
    if event is EventKind.JOINT and variant.is_coupled:
        raise ConfigurationError("event", "el evento conjunto solo existe para los sistemas I")
    method = raw.get("method", "euler")
    if method not in ("euler", "rk4"):
        raise ConfigurationError("method", f"valor {method!r} no permitido (opciones: euler, rk4)")
    outputs = _check_keys(raw.get("outputs"), OUTPUT_KEYS, "outputs")
    for key, target in outputs.items():
        if not isinstance(target, str) or not target:
            raise ConfigurationError(f"outputs.{key}", "se esperaba una ruta")

    return ScenarioConfig(
        name=str(raw.get("name") or preset or variant.value),
        params=params,
        k=k,
        d=d,
        initial=_initial(raw.get("initial"), k, d, "initial"),
        noise=noise,
        mu=mu,
        nu=nu,
        horizon=_number(raw.get("horizon"), "horizon", positive=True, integer=True, optional=True),
        max_time=_number(raw.get("max_time"), "max_time", positive=True, optional=True),
        dt=_number(raw.get("dt", 0.01), "dt", positive=True),
        method=method,
        trials=_number(raw.get("trials", settings.DEFAULT_TRIALS), "trials", positive=True, integer=True),
        seed=_number(raw.get("seed", 0), "seed", nonnegative=True, integer=True),
        event=event,
        outputs=dict(outputs),
        preset=preset,
    )


def load_json(path: Union[str, Path]) -> dict:
    """
    Lee un documento JSON.

    Raises:
        ConfigurationError: Si el fichero no existe o no es JSON válido
    """
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(str(path), "no se encontró el fichero de configuración")
    try:
        with path.open("r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigurationError(str(path), f"JSON inválido: {e}")


def load_scenario_file(path: Union[str, Path]) -> ScenarioConfig:
    return parse_scenario(load_json(path))


def load_grid(source: Union[str, Path, Dict[str, Any]]) -> Dict[str, list]:
    """
    Malla de un barrido: {"ruta.con.puntos": [valores], ...}.

    Se admite también {"parameters": {...}}.

    Raises:
        ConfigurationError: Si algún eje no es una lista
    """
    grid = source if isinstance(source, dict) else load_json(source)
    if set(grid) == {"parameters"}:
        grid = grid["parameters"]
    for key, values in grid.items():
        if not isinstance(values, list):
            raise ConfigurationError(f"grid.{key}", "cada eje del barrido debe ser una lista")
    return grid
