#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from fractions import Fraction
import pytest
from montest import settings
from montest.distance import distance_to_monotone_line
from montest.errors import CapacityError, DomainError
from montest.functions import PartialAssignment, agrees
from montest.helpers import derive_rng
from montest.instances.distributions import (
    DistributionId,
    agreement_probability,
    components,
    enumerate_distribution,
    enumerated_agreement,
    parse_distribution,
    sample,
    split_assignment,
    support_size,
    support_table,
    validate,
)
from montest.instances.params import MuParams, ScaledParams


def test_distribution_names_round_trip():
    """Assert every distribution name parses back to itself."""

    names = ["mu", "nu", "nu-j:0", "nu-j:12", "mu-tilde", "nu-tilde"]
    names.append("nu-tilde:3:1")

    for name in names:
        assert str(parse_distribution(name)) == name

    for name in ["", "nu-j:", "nu-j:-1", "nu-tilde:1", "sigma"]:
        with pytest.raises(ValueError):
            parse_distribution(name)


def test_validate_checks_params_kind_and_indices():
    """Assert mismatched params and components are rejected."""

    params, scaled = MuParams(3, 5), ScaledParams(2, 3, 5)

    validate(DistributionId.nu(2), params)
    validate(DistributionId.nu_tilde(1, 2), scaled)
    with pytest.raises(TypeError):
        validate(DistributionId.mu(), scaled)
    with pytest.raises(TypeError):
        validate(DistributionId.mu_tilde(), params)
    with pytest.raises(DomainError):
        validate(DistributionId.nu(3), params)
    with pytest.raises(DomainError):
        validate(DistributionId.nu_tilde(2, 0), scaled)
    with pytest.raises(ValueError):
        DistributionId.nu_tilde(1)


def test_sample_is_seeded_and_well_formed():
    """Test that samples repeat per seed and have the right shape."""

    params, scaled = MuParams(4, 6), ScaledParams(3, 3, 5)
    for name, p in [("mu", params), ("nu", params), ("nu-tilde", scaled)]:
        dist = parse_distribution(name)
        f = sample(dist, p, derive_rng(7))
        assert f == sample(dist, p, derive_rng(7))
        assert len(f) == p.domain_size
        assert f.range_bound == p.range_bound


def test_monotone_and_far_sides():
    """Assert mu samples are monotone and nu samples half far."""

    rng = derive_rng(12)
    for k in range(4, 13, 2):
        params = MuParams(k, 5)
        for _ in range(5):
            f = sample(DistributionId.mu(), params, rng)
            g = sample(DistributionId.nu(), params, rng)
            assert distance_to_monotone_line(f) == 0
            assert distance_to_monotone_line(g) >= 2 ** (k - 1)


def test_scaled_samples_are_eps_far():
    """Assert nu-tilde samples are eps-far and mu-tilde ones monotone."""

    rng = derive_rng(13)
    for ell, k in [(2, 3), (4, 4), (8, 2)]:
        scaled = ScaledParams(ell, k, 5)
        for _ in range(5):
            f = sample(DistributionId.mu_tilde(), scaled, rng)
            g = sample(DistributionId.nu_tilde(), scaled, rng)
            assert distance_to_monotone_line(f) == 0
            distance = distance_to_monotone_line(g)
            assert distance >= scaled.eps * scaled.domain_size


def test_components_of_mixtures():
    """Test mixture components in level and block order."""

    scaled = ScaledParams(2, 2, 5)
    parts = components(DistributionId.nu_tilde(), scaled)

    assert [str(c) for c in parts] == [
        "nu-tilde:0:0",
        "nu-tilde:0:1",
        "nu-tilde:1:0",
        "nu-tilde:1:1",
    ]
    assert components(DistributionId.mu(), MuParams(2, 5)) == [
        DistributionId.mu()
    ]


def test_single_point_agreement_example():
    """Assert digits (1, 2) at point 0 agree with probability 1/16."""

    params = MuParams(2, 5)
    alpha = PartialAssignment({0: 7})

    for dist in (DistributionId.mu(), DistributionId.nu(1)):
        assert agreement_probability(alpha, dist, params) == Fraction(1, 16)
        assert enumerated_agreement(alpha, dist, params) == Fraction(1, 16)


def test_analytic_agreement_matches_enumeration():
    """Assert analytic and enumerated agreement agree exactly."""

    rng = derive_rng(5)
    params = MuParams(2, 4)
    dists = [DistributionId.mu(), DistributionId.nu()]
    dists += [DistributionId.nu(j) for j in range(2)]

    for _ in range(60):
        source = dists[int(rng.integers(len(dists)))]
        f = sample(source, params, rng)
        weight = int(rng.integers(1, 4))
        points = rng.choice(4, size=weight, replace=False).tolist()
        alpha = PartialAssignment({x: f[x] for x in points})
        noisy = PartialAssignment(
            {x: int(rng.integers(16)) for x in points}
        )
        for dist in dists:
            for a in (alpha, noisy):
                assert agreement_probability(
                    a, dist, params
                ) == enumerated_agreement(a, dist, params)


def test_scaled_agreement_matches_enumeration():
    """Test the block product formula against enumeration."""

    rng = derive_rng(15)
    scaled = ScaledParams(2, 1, 5)
    dists = [DistributionId.mu_tilde(), DistributionId.nu_tilde()]
    dists.append(DistributionId.nu_tilde(1, 0))

    for _ in range(40):
        f = sample(dists[int(rng.integers(3))], scaled, rng)
        points = rng.choice(4, size=int(rng.integers(1, 4)), replace=False)
        alpha = PartialAssignment({int(x): f[int(x)] for x in points})
        for dist in dists:
            assert agreement_probability(
                alpha, dist, scaled
            ) == enumerated_agreement(alpha, dist, scaled)


def test_enumeration_weights_sum_to_one():
    """Assert enumerated supports are probability distributions."""

    params = MuParams(2, 4)
    for dist in (DistributionId.mu(), DistributionId.nu()):
        support = enumerate_distribution(dist, params)
        assert sum(w for _, w in support) == 1
        total = sum(
            w for f, w in support if agrees(f, PartialAssignment({1: 6}))
        )
        assert total == agreement_probability(
            PartialAssignment({1: 6}), dist, params
        )


def test_enumeration_respects_cap():
    """Assert enumeration refuses supports above the cap."""

    params = MuParams(2, 5)
    assert support_size(DistributionId.mu(), params) == 64
    assert support_size(DistributionId.nu(), params) == 128
    assert support_size(DistributionId.nu_tilde(), ScaledParams(2, 1, 5)) == 32
    with pytest.raises(CapacityError):
        enumerate_distribution(DistributionId.nu(), params, cap=100)


def test_split_assignment_shifts_into_blocks():
    """Test that assignments split into per-block local entries."""

    alpha = PartialAssignment({1: 3, 4: 130, 7: 10})
    blocks = split_assignment(alpha, ScaledParams(2, 2, 5))

    assert blocks == {0: [(1, 3)], 1: [(0, 5), (3, -115)]}
    assert agreement_probability(
        alpha, DistributionId.mu_tilde(), ScaledParams(2, 2, 5)
    ) == 0


@pytest.mark.slow
def test_nu_draws_are_half_far_at_scale():
    """Assert 1000 nu draws over k = 4..12 all have distance >= 2 ** (k-1)."""

    rng = derive_rng(120)
    failures = 0
    for draw in range(1000):
        k = 4 + draw % 9
        g = sample(DistributionId.nu(), MuParams(k, 5), rng)
        failures += distance_to_monotone_line(g) < 2 ** (k - 1)

    assert failures == 0


@pytest.mark.slow
def test_scaled_draws_at_scale():
    """Assert 500 nu-tilde draws are eps-far and mu-tilde draws monotone."""

    rng = derive_rng(121)
    for draw in range(500):
        ell, k = 1 + draw % 8, 2 + (draw // 8) % 7
        scaled = ScaledParams(ell, k, 5)
        f = sample(DistributionId.mu_tilde(), scaled, rng)
        g = sample(DistributionId.nu_tilde(), scaled, rng)
        assert distance_to_monotone_line(f) == 0
        distance = distance_to_monotone_line(g)
        assert distance >= scaled.eps * scaled.domain_size


def test_support_tables_cache_is_bounded():
    """Assert only SUPPORT_TABLE_CACHE enumerated tables stay in memory."""

    info = support_table.cache_info()
    assert info.maxsize == settings.SUPPORT_TABLE_CACHE

    for m in range(5, 5 + settings.SUPPORT_TABLE_CACHE + 2):
        support_table(DistributionId.mu(), MuParams(2, m))
    assert support_table.cache_info().currsize == settings.SUPPORT_TABLE_CACHE
