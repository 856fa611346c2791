# -*- coding: utf-8 -*-
"""Emergence routes"""
from flask import Blueprint, jsonify, request
from werkzeug.exceptions import HTTPException

from noisy_emergence.api.dependencies import get_harness_service
from noisy_emergence.domain.errors import ConfigurationError
from noisy_emergence.domain.services.harness_service import trace_columns, trace_rows
from noisy_emergence.infrastructure.config.scenario_loader import parse_scenario

emergence_bp = Blueprint('emergence', __name__)


def _scenario_from_body(extra_keys=()):
    """Valida el body JSON y construye el escenario; devuelve (escenario, extras, servicio)."""
    data = request.get_json()
    if not data or not isinstance(data, dict):
        raise ConfigurationError("<body>", "se requiere un body JSON con la configuración del escenario")
    extras = {key: data.pop(key) for key in extra_keys if key in data}
    harness_service = get_harness_service(max_workers=1)
    scenario = harness_service.build_scenario(parse_scenario(data))
    return scenario, extras, harness_service


def _validation_error(e: ValueError):
    body = {"error": "Error de validación", "details": str(e)}
    if isinstance(e, ConfigurationError):
        body["field"] = e.field_path
    return jsonify(body), 400


@emergence_bp.route('/constants', methods=['POST'])
def constants():
    """
    Constantes del estado inicial (Q, a, b, U₀, B₀, ℋ, T...) de un escenario.

    Ejemplo POST:
    {
        "preset": "flocking-2d",
        "targets": {"nu": 0.05}
    }
    """
    try:
        scenario, _, _ = _scenario_from_body()
        return jsonify(scenario.constants.to_dict()), 200
    except ValueError as e:
        return _validation_error(e)
    except HTTPException:
        raise
    except Exception as e:
        return jsonify({"error": "Error al calcular las constantes", "details": str(e)}), 500


@emergence_bp.route('/check', methods=['POST'])
def check():
    """
    Informe de hipótesis: operadores en el estado inicial, caso del teorema,
    cota de probabilidad y certificación del escenario.
    """
    try:
        scenario, _, _ = _scenario_from_body()
        return jsonify(scenario.to_dict()), 200
    except ValueError as e:
        return _validation_error(e)
    except HTTPException:
        raise
    except Exception as e:
        return jsonify({"error": "Error al comprobar las hipótesis", "details": str(e)}), 500


@emergence_bp.route('/simulate', methods=['POST'])
def simulate():
    """
    Ejecuta un ensayo y devuelve su resultado y la traza.

    Además de la configuración acepta "trial" (índice del ensayo, por defecto 0).
    """
    try:
        scenario, extras, harness_service = _scenario_from_body(extra_keys=("trial",))
        trial = extras.get("trial", 0)
        if isinstance(trial, bool) or not isinstance(trial, int) or trial < 0:
            return jsonify({"error": "El campo 'trial' debe ser un entero ≥ 0"}), 400
        result, trajectory = harness_service.simulate(scenario, trial)
        return jsonify({
            "result": result.to_dict(),
            "columns": trace_columns(scenario.config),
            "trace": trace_rows(trajectory),
        }), 200
    except ValueError as e:
        return _validation_error(e)
    except HTTPException:
        raise
    except Exception as e:
        return jsonify({"error": "Error al simular el escenario", "details": str(e)}), 500


@emergence_bp.route('/montecarlo', methods=['POST'])
def montecarlo():
    """
    Monte Carlo del evento del teorema frente a su cota inferior.

    Ejemplo POST:
    {
        "preset": "language",
        "trials": 200
    }
    """
    try:
        scenario, _, harness_service = _scenario_from_body()
        summary = harness_service.monte_carlo(scenario)
        return jsonify(summary.to_dict()), 200
    except ValueError as e:
        return _validation_error(e)
    except HTTPException:
        raise
    except Exception as e:
        return jsonify({"error": "Error en la simulación de Monte Carlo", "details": str(e)}), 500
