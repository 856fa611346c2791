# -*- coding: utf-8 -*-
"""Domain ports - Interfaces"""
