# -*- coding: utf-8 -*-
"""Domain layer - Dynamics, theory and verification logic"""
