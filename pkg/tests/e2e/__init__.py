# -*- coding: utf-8 -*-
"""End-to-end tests"""

