# -*- coding: utf-8 -*-
"""Main Flask application"""
import sys

from flask import Flask, jsonify
from werkzeug.exceptions import BadRequest

from noisy_emergence.api.routes import emergence, health
from noisy_emergence.infrastructure.config import settings
from noisy_emergence.infrastructure.config.settings import configure_logging


def handle_bad_request(e):
    """Maneja errores de parsing JSON y otros errores BadRequest."""
    error_description = str(e.description) if hasattr(e, 'description') else str(e)

    # Detectar errores de parsing JSON
    if "Failed to decode JSON" in error_description or "Expecting" in error_description:
        return jsonify({
            "error": "Error al parsear el JSON",
            "details": error_description,
            "suggestion": "Asegúrate de que el JSON esté bien formateado con todas las claves entre comillas "
                          "dobles. Ejemplo: {\"preset\": \"flocking-2d\", \"targets\": {\"nu\": 0.05}}"
        }), 400

    return jsonify({
        "error": "Bad Request",
        "details": error_description
    }), 400


def create_app() -> Flask:
    """Factory function to create and configure the Flask app"""
    configure_logging()
    app = Flask(__name__)
    app.register_error_handler(BadRequest, handle_bad_request)
    app.register_blueprint(health.health_bp)
    app.register_blueprint(emergence.emergence_bp)
    return app


if __name__ == '__main__':
    print("=" * 60, file=sys.stderr)
    print("Configuración cargada:", file=sys.stderr)
    print("=" * 60, file=sys.stderr)
    print(f"NE_LOG_LEVEL: {settings.LOG_LEVEL}", file=sys.stderr)
    print(f"NE_CDF_CACHE_DIR: {settings.CDF_CACHE_DIR or 'desactivada'}", file=sys.stderr)
    print(f"NE_CDF_MC_SAMPLES: {settings.CDF_MC_SAMPLES}", file=sys.stderr)
    print(f"NE_MAX_WORKERS: {settings.MAX_WORKERS}", file=sys.stderr)
    print("=" * 60, file=sys.stderr)

    app = create_app()

    print("Iniciando servidor...", file=sys.stderr)
    app.run(host=settings.API_HOST, port=settings.API_PORT, debug=settings.API_DEBUG)
