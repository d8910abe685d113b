#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# flake8: noqa: F401
"""montest: monotonicity testers and their query lower bound."""
from . import (
    distance,
    errors,
    functions,
    helpers,
    instances,
    ranks,
    reports,
    settings,
    testers,
    verification,
)
