# -*- coding: utf-8 -*-
"""API layer - HTTP endpoints, CLI and request/response handling"""
