#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from fractions import Fraction
import math
import pytest
import numpy as np
from montest.helpers import (
    bit_at,
    ceil_log2,
    derive_rng,
    parse_fraction,
    popcount,
    prefix_node,
    product,
    run_ordered,
    wilson_interval,
)


def test_parse_fraction_accepts_integer_ratios():
    """Assert parse_fraction reads p/q and bare integers exactly."""

    tests = {
        "1/2": Fraction(1, 2),
        "3/64": Fraction(3, 64),
        " 10 / 4": Fraction(5, 2),
        "7": Fraction(7),
    }

    for s_in, result in tests.items():
        assert parse_fraction(s_in) == result


def test_parse_fraction_rejects_floats_and_garbage():
    """Assert parse_fraction raises ``ValueError`` on anything inexact."""

    for s_in in ["0.5", "1e-3", "-1/2", "a/b", "", "1/0"]:
        with pytest.raises(ValueError):
            parse_fraction(s_in)


def test_ceil_log2_matches_float_definition():
    """Assert ceil_log2 agrees with math.log2 away from rounding trouble."""

    for value in range(1, 2000):
        assert ceil_log2(value) == math.ceil(math.log2(value))
    assert ceil_log2(Fraction(1, 2)) == 0
    assert ceil_log2(Fraction(1025, 2)) == 10
    assert ceil_log2(Fraction(1024, 2)) == 9


def test_bit_helpers_read_msb_first():
    """Test popcount, bit_at and prefix_node on small inputs."""

    assert popcount(0) == 0
    assert popcount(2 ** 40 - 1) == 40
    assert [bit_at(0b1011, i, 4) for i in range(4)] == [1, 0, 1, 1]
    # heap numbering of the prefixes of 0b10 with k = 2
    assert [prefix_node(0b10, length, 2) for length in range(2)] == [0, 2]
    assert prefix_node(0b01, 1, 2) == 1


def test_derive_rng_streams_are_reproducible_and_distinct():
    """Assert derived streams repeat per key and differ across keys."""

    first = derive_rng(5, 0).integers(2 ** 32, size=8)
    again = derive_rng(5, 0).integers(2 ** 32, size=8)
    other = derive_rng(5, 1).integers(2 ** 32, size=8)
    spawned = np.random.SeedSequence(5).spawn(2)[1]
    from_spawn = np.random.default_rng(spawned).integers(2 ** 32, size=8)

    assert (first == again).all()
    assert not (first == other).all()
    assert (other == from_spawn).all()


def test_wilson_interval_contains_estimate():
    """Assert the Wilson interval is ordered, clipped and covers p-hat."""

    for successes, trials in [(0, 10), (10, 10), (37, 100), (1, 1000)]:
        low, high = wilson_interval(successes, trials, 2.576)
        assert 0.0 <= low <= successes / trials <= high <= 1.0

    with pytest.raises(ValueError):
        wilson_interval(0, 0, 1.96)


def test_run_ordered_keeps_payload_order():
    """Assert run_ordered returns results by payload index."""

    payloads = list(range(-5, 5))
    assert run_ordered(abs, payloads) == [abs(p) for p in payloads]
    assert run_ordered(abs, payloads, jobs=2) == [abs(p) for p in payloads]


def test_product_is_exact():
    """Test product on fractions and the empty product."""

    assert product([Fraction(1, 2), Fraction(2, 3), 3]) == 1
    assert product([]) == 1
