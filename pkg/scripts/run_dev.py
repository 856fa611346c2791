# -*- coding: utf-8 -*-
"""
Script para ejecutar el servidor de la API en modo desarrollo
"""
import sys
from pathlib import Path

# Añadir src al path para importar noisy_emergence
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / "src"))

from noisy_emergence.api.main import create_app  # noqa: E402
from noisy_emergence.infrastructure.config import settings  # noqa: E402

if __name__ == '__main__':
    app = create_app()
    print("=" * 60, file=sys.stderr)
    print("Servidor iniciado en modo desarrollo", file=sys.stderr)
    print("=" * 60, file=sys.stderr)
    app.run(host=settings.API_HOST, port=settings.API_PORT, debug=True)
