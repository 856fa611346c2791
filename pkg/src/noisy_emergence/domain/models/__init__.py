# -*- coding: utf-8 -*-
"""Domain models / entities"""
