# -*- coding: utf-8 -*-
"""Configuration infrastructure"""
