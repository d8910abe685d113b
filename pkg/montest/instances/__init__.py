#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Hard instance distributions and their hypergrid embedding."""
from . import distributions, grid, mu, params  # noqa: F401
