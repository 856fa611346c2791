# -*- coding: utf-8 -*-
"""Persistence infrastructure - CSV/JSON adapters"""
