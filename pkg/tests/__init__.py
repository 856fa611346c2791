# -*- coding: utf-8 -*-
"""Tests package"""

