# -*- coding: utf-8 -*-
"""API routes"""
