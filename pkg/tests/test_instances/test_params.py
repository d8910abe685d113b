#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from fractions import Fraction
import pytest
from montest.errors import DomainError
from montest.helpers import derive_rng
from montest.instances.params import (
    DigitSeed,
    MuParams,
    ScaledParams,
    prefix_node_of,
    prefix_string,
)


def test_mu_params_validate_and_derive_sizes():
    """Assert MuParams validation and derived sizes."""

    params = MuParams(3, 5)
    assert (params.domain_size, params.range_bound) == (8, 125)
    assert params.seed_size == 7 and params.lemma_ready
    assert not MuParams(3, 4).lemma_ready
    assert MuParams.cubic(10).m == 1000

    with pytest.raises(DomainError):
        MuParams(0, 5)
    with pytest.raises(DomainError):
        MuParams(3, 2)


def test_scaled_params_blocks():
    """Test ScaledParams block layout and proximity parameter."""

    scaled = ScaledParams(4, 3, 5)

    assert scaled.eps == Fraction(1, 8)
    assert scaled.domain_size == 32
    assert scaled.block_offset == 125
    assert scaled.range_bound == 500
    assert scaled.base == MuParams(3, 5)
    with pytest.raises(DomainError):
        ScaledParams(0, 3, 5)


def test_prefix_numbering_round_trip():
    """Assert prefix_string and prefix_node_of are inverse."""

    for node in range(63):
        assert prefix_node_of(prefix_string(node)) == node
    assert prefix_string(6) == "11"
    with pytest.raises(DomainError):
        prefix_node_of("012")


def test_digit_seed_mapping_view():
    """Assert DigitSeed behaves as a prefix-keyed mapping."""

    seed = DigitSeed([0, 1, 2, 3, 0, 1, 2])

    assert seed.k == 3 and len(seed) == 7
    assert seed["10"] == 1 and seed["11"] == 2
    assert seed.level(2) == (3, 0, 1, 2)
    assert DigitSeed.from_mapping(dict(seed)) == seed
    with pytest.raises(KeyError):
        seed["000"]
    with pytest.raises(DomainError):
        DigitSeed([0, 1])
    with pytest.raises(DomainError):
        DigitSeed.from_mapping({"": 0, "1": 0})


def test_digit_seed_random_and_enumerate_fit_params():
    """Test random and enumerated seeds stay within [0, m - 2]."""

    params = MuParams(2, 4)
    seeds = list(DigitSeed.enumerate(params))

    assert len(seeds) == 3 ** 3
    assert len(set(seeds)) == len(seeds)
    rng = derive_rng(0)
    for _ in range(50):
        seed = DigitSeed.random(params, rng)
        seed.check(params)
        assert seed in seeds

    with pytest.raises(DomainError):
        DigitSeed([3, 0, 0]).check(params)
    with pytest.raises(DomainError):
        DigitSeed([0]).check(params)
