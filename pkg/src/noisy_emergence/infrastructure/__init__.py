# -*- coding: utf-8 -*-
"""Infrastructure layer - Technical implementations"""
