#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Project-wide settings for montest.

Every tunable lives here as an upper-case module constant. Library
functions take these as keyword defaults, and the command-line front
end exposes the same knobs as flags.
"""

TOOL_NAME = "montest"
TOOL_VERSION = "0.1.0"

# Reports carry this as their top-level "schema" field.
REPORT_SCHEMA = 1

DEFAULT_SEED = 0

# Number of tester repetitions is ceil(ITERATION_CONSTANT / eps).
ITERATION_CONSTANT = 6

# Smallest digit base accepted by MuParams. Lemma checks need the
# larger LEMMA_MIN_BASE so that good digits exist with slack.
MIN_DIGIT_BASE = 3
LEMMA_MIN_BASE = 5

# Largest ground set handed to the branch-and-bound poset oracle.
POSET_ORACLE_CAP = 24
# Largest ground set handed to the matching-based poset oracle.
MATCHING_ORACLE_CAP = 4096

# Exhaustive enumeration of weighted functions stops above this.
ENUMERATION_CAP = 10 ** 7
# Enumerated support tables kept in memory; each can hold up to
# ENUMERATION_CAP rows.
SUPPORT_TABLE_CACHE = 8

# Cut-lemma checks run exhaustively when 2 ** k is at most this.
CUT_EXHAUSTIVE_DOMAIN = 16

# Two-sided 99% normal quantile, used for confidence intervals.
CONFIDENCE_Z = 2.5758293035489004
# Monte Carlo slack, in standard deviations, for the bad-leaf check.
BAD_HIT_SIGMAS = 3

LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s: %(message)s"
