# -*- coding: utf-8 -*-
"""Domain services - Use cases"""
