# -*- coding: utf-8 -*-
"""Unit tests"""

