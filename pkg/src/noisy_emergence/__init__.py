# -*- coding: utf-8 -*-
"""
noisy_emergence - Simulación y verificación de emergencia en sistemas multiagente con ruido
"""

__version__ = "0.1.0"
