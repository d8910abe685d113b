#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import pytest
from montest.distance import distance_to_monotone_line
from montest.errors import DomainError
from montest.helpers import derive_rng
from montest.instances.mu import (
    flip_mask,
    mu_from_seed,
    mu_from_seed_recursive,
    mu_value,
    nu_j_from_seed,
    scaled_from_seeds,
)
from montest.instances.params import DigitSeed, MuParams, ScaledParams
from montest.ranks import to_digits


def test_mu_definitions_agree_exhaustively():
    """Assert the level-wise, recursive and pointwise builds agree."""

    for k in (1, 2, 3):
        params = MuParams(k, 5)
        for seed in DigitSeed.enumerate(params):
            f = mu_from_seed(params, seed)
            assert f == mu_from_seed_recursive(params, seed)
            assert list(f) == [
                mu_value(params, seed, x) for x in range(params.domain_size)
            ]


def test_mu_definitions_agree_on_random_seeds():
    """Assert the builds agree on random seeds, big ranges included."""

    rng = derive_rng(2)
    for k, m in [(6, 5), (8, 1000), (10, 7)]:
        params = MuParams(k, m)
        for _ in range(5):
            seed = DigitSeed.random(params, rng)
            assert mu_from_seed(params, seed) == mu_from_seed_recursive(
                params, seed
            )


def test_mu_is_strictly_increasing_with_digit_structure():
    """Assert mu functions increase and digit i is a_s + bit_i(x)."""

    params = MuParams(4, 6)
    seed = DigitSeed.random(params, derive_rng(9))
    f = mu_from_seed(params, seed)

    assert all(a < b for a, b in zip(f, f.values[1:]))
    assert distance_to_monotone_line(f) == 0
    x = 0b1011
    digits = to_digits(f[x], params.m, params.k)
    assert digits == (
        seed[""] + 1,
        seed["1"] + 0,
        seed["10"] + 1,
        seed["101"] + 1,
    )


def test_mu_handles_values_beyond_int64():
    """Test the object-dtype path for ranges above 2 ** 63."""

    params = MuParams(4, 2 ** 20)
    seed = DigitSeed.random(params, derive_rng(1))
    f = mu_from_seed(params, seed)

    assert f.range_bound == 2 ** 80
    assert list(f) == [mu_value(params, seed, x) for x in range(16)]


def test_nu_j_flips_one_bit():
    """Assert nu-j is mu composed with the level-j bit flip."""

    params = MuParams(3, 5)
    seed = DigitSeed.random(params, derive_rng(4))
    f = mu_from_seed(params, seed)
    for j in range(3):
        g = nu_j_from_seed(params, seed, j)
        mask = flip_mask(params, j)
        assert list(g) == [f[x ^ mask] for x in range(8)]
        assert distance_to_monotone_line(g) >= 4

    with pytest.raises(DomainError):
        flip_mask(params, 3)


def test_scaled_blocks_are_offset():
    """Assert block s of a scaled function is offset by s * m ** k."""

    scaled = ScaledParams(3, 2, 5)
    rng = derive_rng(6)
    seeds = [DigitSeed.random(scaled.base, rng) for _ in range(3)]
    f = scaled_from_seeds(scaled, seeds)

    for s, seed in enumerate(seeds):
        block = f.values[4 * s : 4 * s + 4]
        base = mu_from_seed(scaled.base, seed)
        assert list(block) == [25 * s + v for v in base]
    assert distance_to_monotone_line(f) == 0

    g = scaled_from_seeds(scaled, seeds, flip=(1, 0))
    assert g.values[:4] == f.values[:4] and g.values[8:] == f.values[8:]
    assert distance_to_monotone_line(g) >= 2

    with pytest.raises(DomainError):
        scaled_from_seeds(scaled, seeds[:2])
    with pytest.raises(DomainError):
        scaled_from_seeds(scaled, seeds, flip=(3, 0))
