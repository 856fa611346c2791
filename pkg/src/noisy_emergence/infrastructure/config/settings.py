# -*- coding: utf-8 -*-
"""
Configuración del servicio - Carga de variables de entorno
"""
import logging
import os
from dotenv import load_dotenv

# Cargar variables de entorno desde el archivo .env
load_dotenv()

# Nivel de logging para los servicios de dominio
LOG_LEVEL = os.getenv('NE_LOG_LEVEL', 'INFO').upper()

# Caché de tablas Monte Carlo de la CDF de ||H|| (cadena vacía la desactiva)
CDF_CACHE_DIR = os.getenv('NE_CDF_CACHE_DIR', '.cache/cdf_tables')
CDF_MC_SAMPLES = int(os.getenv('NE_CDF_MC_SAMPLES', '1000000'))
CDF_MC_SEED = int(os.getenv('NE_CDF_MC_SEED', '20240101'))

# Monte Carlo de escenarios
# Estos valores por defecto son decisiones de escala de escritorio, no datos del modelo
DEFAULT_TRIALS = int(os.getenv('NE_DEFAULT_TRIALS', '1000'))
MAX_WORKERS = int(os.getenv('NE_MAX_WORKERS', '1'))

# Servidor de desarrollo de la API
API_HOST = os.getenv('NE_API_HOST', '0.0.0.0')
API_PORT = int(os.getenv('NE_API_PORT', '5000'))
API_DEBUG = os.getenv('NE_API_DEBUG', 'false').lower() in ('1', 'true', 'yes')


def configure_logging(level: str = None) -> None:
    """
    Configura el logging raíz una sola vez.

    Args:
        level: Nivel a usar (opcional, usa LOG_LEVEL si no se proporciona)
    """
    logging.basicConfig(
        level=getattr(logging, (level or LOG_LEVEL), logging.INFO),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s'
    )
