#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import itertools
import pytest
from montest.distance import (
    distance_to_monotone_line,
    distance_to_monotone_poset,
    greedy_disjoint_pairs,
    lnds_length,
    max_disjoint_violating_pairs,
    violating_pairs,
)
from montest.errors import CapacityError, DomainError
from montest.functions import LineFunction, PosetOrder
from montest.helpers import derive_rng


def _brute_force_distance(f, order):
    """Smallest set of points whose removal leaves no violating pair."""

    pairs = [
        (order.index(p.x), order.index(p.y)) for p in violating_pairs(f, order)
    ]
    for size in range(len(f) + 1):
        for removed in itertools.combinations(range(len(f)), size):
            gone = set(removed)
            if all(x in gone or y in gone for x, y in pairs):
                return size
    return len(f)


def test_lnds_length_counts_non_decreasing_runs():
    """Assert lnds_length treats equal values as non-decreasing."""

    tests = [
        ([], 0),
        ([4], 1),
        ([2, 2, 2], 3),
        ([3, 2, 1, 0], 1),
        ([1, 3, 2, 2, 4, 0], 4),
    ]

    for values, result in tests:
        assert lnds_length(values) == result


def test_line_distance_matches_brute_force():
    """Assert n - LNDS equals the smallest violation cover on the line."""

    rng = derive_rng(11)
    for _ in range(40):
        n = int(rng.integers(1, 9))
        f = LineFunction(rng.integers(0, 4, size=n).tolist(), range_bound=4)
        order = PosetOrder.line(n)
        assert distance_to_monotone_line(f) == _brute_force_distance(f, order)


def test_poset_methods_agree_on_small_grids():
    """Assert branch and bound, matching and brute force agree."""

    rng = derive_rng(3)
    for side, dimension in [(2, 2), (3, 2), (2, 3), (4, 1)]:
        order = PosetOrder.hypergrid(side, dimension)
        for _ in range(10):
            f = LineFunction(
                rng.integers(0, 5, size=order.size).tolist(), range_bound=5
            )
            exact = _brute_force_distance(f, order)
            assert distance_to_monotone_poset(f, order) == exact
            assert (
                distance_to_monotone_poset(f, order, method="matching")
                == exact
            )


def test_poset_distance_on_line_matches_lnds():
    """Test the poset oracles against the line oracle on the line."""

    rng = derive_rng(8)
    for _ in range(20):
        f = LineFunction(rng.integers(0, 50, size=20).tolist(), range_bound=50)
        order = PosetOrder.line(20)
        expected = distance_to_monotone_line(f)
        assert distance_to_monotone_poset(f, order) == expected
        assert (
            distance_to_monotone_poset(f, order, method="matching")
            == expected
        )


def test_poset_distance_enforces_caps_and_methods():
    """Assert capacity, size and method errors are raised."""

    f = LineFunction([0] * 32)
    with pytest.raises(CapacityError):
        distance_to_monotone_poset(f, PosetOrder.hypergrid(2, 5))
    assert (
        distance_to_monotone_poset(f, PosetOrder.hypergrid(2, 5), cap=32)
        == 0
    )
    with pytest.raises(DomainError):
        distance_to_monotone_poset(f, PosetOrder.hypergrid(2, 4))
    with pytest.raises(ValueError):
        distance_to_monotone_poset(f, PosetOrder.line(32), method="lp")


def test_violating_pairs_are_lexicographic():
    """Assert every pair violates and they come sorted."""

    f = LineFunction([3, 0, 2, 1])
    pairs = violating_pairs(f)

    assert [tuple(p) for p in pairs] == [(0, 1), (0, 2), (0, 3), (2, 3)]
    assert pairs == sorted(pairs)


def test_greedy_pairs_are_disjoint_and_certify_half_distance():
    """Assert greedy pairs are disjoint, violating and at least d/2."""

    rng = derive_rng(21)
    for _ in range(50):
        f = LineFunction(rng.integers(0, 30, size=40).tolist(), range_bound=30)
        pairs = greedy_disjoint_pairs(f)
        points = [z for pair in pairs for z in pair]

        assert len(points) == len(set(points))
        assert all(pair.x < pair.y and f[pair.x] > f[pair.y] for pair in pairs)
        assert 2 * len(pairs) >= distance_to_monotone_line(f)
        assert len(pairs) <= distance_to_monotone_line(f)
        for i, pair in enumerate(pairs, start=1):
            assert pair.y - pair.x <= 2 * i - 1

    assert len(greedy_disjoint_pairs(LineFunction([5, 4, 3, 2]), limit=1)) == 1


def test_max_disjoint_pairs_on_grid_is_a_lower_bound():
    """Assert grid pairs are disjoint violations below the exact distance."""

    rng = derive_rng(4)
    order = PosetOrder.hypergrid(4, 2)
    for _ in range(20):
        f = LineFunction(rng.integers(0, 6, size=16).tolist(), range_bound=6)
        pairs = max_disjoint_violating_pairs(f, order)
        points = [z for pair in pairs for z in pair]

        assert len(points) == len(set(points))
        assert all(pair.is_violated_by(f, order) for pair in pairs)
        exact = distance_to_monotone_poset(f, order, method="matching")
        assert len(pairs) <= exact <= 2 * len(pairs)


@pytest.mark.slow
def test_poset_oracle_equals_line_oracle_at_scale():
    """Assert both poset methods equal n - LNDS on 200 random lines."""

    rng = derive_rng(9)
    for trial in range(200):
        n = 4 + trial % 17
        f = LineFunction(rng.integers(0, n, size=n).tolist(), range_bound=n)
        order = PosetOrder.line(n)
        expected = distance_to_monotone_line(f)
        assert distance_to_monotone_poset(f, order) == expected
        assert (
            distance_to_monotone_poset(f, order, method="matching")
            == expected
        )
