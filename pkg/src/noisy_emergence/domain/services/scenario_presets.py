# -*- coding: utf-8 -*-
"""
Presets de escenarios.

Cada preset es un documento de configuración parcial con el mismo esquema
que los ficheros JSON; las claves explícitas del usuario lo sobrescriben.

Las constantes de acoplamiento no se fijan aquí: con núcleos de
Cucker–Smale el cargador las deriva como G = k·K (o K = k·K en continuo)
porque ninguna distancia entre agentes supera la norma del cociente.

Los tamaños (k, d, N, semillas, radios) son decisiones de escala de
escritorio, no valores del modelo.
"""
import copy
from typing import Dict

_FLOCKING = {
    "variant": "I(D)",
    "k": 10,
    "d": 2,
    "inner": "pairwise",
    "x_is_quotient": True,
    "initial": {"kind": "random_box", "x_scale": 1.0, "y_scale": 0.1},
    "kernel": {"kind": "cucker_smale", "scale": 1.0, "exponent": 0.5},
    "params": {"h": 0.05, "j": {"kind": "identity"}},
    "noise": {"y": {"kind": "ball", "radius": 0.01}},
    "targets": {"nu": 0.05},
    "trials": 1000,
    "seed": 20240101,
    "event": "emergence",
}

_LANGUAGE = {
    "variant": "II(D)",
    "k": 5,
    "d": 2,
    "inner": "pairwise",
    "x_is_quotient": True,
    "initial": {"kind": "random_box", "x_scale": 1.0, "y_scale": 0.5},
    "kernel_x": {"kind": "cucker_smale", "scale": 1.0, "exponent": 0.0},
    "kernel_y": {"kind": "cucker_smale", "scale": 1.0, "exponent": 0.0},
    "params": {"h_1": 0.1, "h_2": 0.1},
    "noise": {"x": {"kind": "ball", "radius": 0.01}, "y": {"kind": "ball", "radius": 0.01}},
    "targets": {"mu": 0.1, "nu": 0.05},
    "trials": 1000,
    "seed": 20240102,
    "event": "emergence",
}

_FLOCKING_CONTINUOUS = {
    "variant": "I(C)",
    "k": 10,
    "d": 2,
    "inner": "pairwise",
    "x_is_quotient": True,
    "initial": {"kind": "random_box", "x_scale": 1.0, "y_scale": 0.1},
    "kernel": {"kind": "cucker_smale_squared", "scale": 1.0, "exponent": 0.0},
    "params": {"j": {"kind": "identity"}},
    "noise": {"y": {"kind": "ball", "radius": 0.01}},
    "targets": {"nu": 0.05},
    "dt": 0.01,
    "method": "euler",
    "trials": 1000,
    "seed": 20240103,
    "event": "emergence",
}

_LANGUAGE_CONTINUOUS = {
    "variant": "II(C)",
    "k": 5,
    "d": 2,
    "inner": "pairwise",
    "x_is_quotient": True,
    "initial": {"kind": "random_box", "x_scale": 1.0, "y_scale": 0.5},
    "kernel_x": {"kind": "cucker_smale_squared", "scale": 1.0, "exponent": 0.0},
    "kernel_y": {"kind": "cucker_smale_squared", "scale": 1.0, "exponent": 0.0},
    "params": {},
    "noise": {"x": {"kind": "zero"}, "y": {"kind": "ball", "radius": 0.01}},
    "targets": {"mu": 0.1, "nu": 0.05},
    "dt": 0.01,
    "method": "euler",
    "trials": 1000,
    "seed": 20240104,
    "event": "emergence",
}

PRESETS: Dict[str, dict] = {
    "flocking-2d": _FLOCKING,
    "flocking-3d": {**_FLOCKING, "d": 3},
    "language": _LANGUAGE,
    "flocking-continuous": _FLOCKING_CONTINUOUS,
    "language-continuous": _LANGUAGE_CONTINUOUS,
}


def preset_names():
    return sorted(PRESETS)


def get_preset(name: str) -> dict:
    """
    Copia profunda del preset.

    Raises:
        KeyError: Si el preset no existe
    """
    return copy.deepcopy(PRESETS[name])


def merge(base: dict, override: dict) -> dict:
    """Mezcla recursiva: los diccionarios se combinan, el resto se sustituye."""
    result = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(result.get(key), dict):
            result[key] = merge(result[key], value)
        else:
            result[key] = copy.deepcopy(value)
    return result
