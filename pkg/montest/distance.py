#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Exact distance-to-monotonicity oracles and violating pairs."""
from collections import deque
from typing import Iterator, List, Optional, Sequence, Tuple
import bisect
import logging

import numpy as np

from montest import settings
from montest.errors import CapacityError, DomainError
from montest.functions import LineFunction, PosetOrder, ViolationPair
from montest.helpers import popcount


logger = logging.getLogger(__name__)

POSET_METHODS = ("branch-and-bound", "matching")

_INT64_LIMIT = 2 ** 63


def lnds_length(values: Sequence[int]) -> int:
    """
    Length of the longest non-decreasing subsequence, in O(n log n).

    Patience sorting: ``tails[i]`` is the smallest possible last value
    of a non-decreasing subsequence of length ``i + 1``.

    Parameters
    ----------
    values: sequence of int
        May be empty. A ``LineFunction`` works directly.

    Examples
    --------
    >>> from montest.distance import lnds_length
    >>> lnds_length([0, 1, 2, 3]), lnds_length([1, 0])
    (4, 1)
    >>> lnds_length([2, 0, 1, 3])
    3
    >>> lnds_length([])
    0
    """

    tails: List[int] = []
    for value in values:
        position = bisect.bisect_right(tails, value)
        if position == len(tails):
            tails.append(value)
        else:
            tails[position] = value
    return len(tails)


def distance_to_monotone_line(f: LineFunction) -> int:
    """
    Fewest points of ``f`` to change to make it non-decreasing.

    Values may be changed to anything in an unbounded total order, which
    makes ``n - lnds_length(f)`` exact.

    Examples
    --------
    >>> from montest.distance import distance_to_monotone_line
    >>> from montest.functions import LineFunction
    >>> distance_to_monotone_line(LineFunction([3, 2, 1, 0]))
    3
    >>> distance_to_monotone_line(LineFunction([0, 0, 5]))
    0
    """

    return len(f) - lnds_length(f)


def _check_size(f: LineFunction, order: PosetOrder) -> None:
    if len(f) != order.size:
        raise DomainError(
            f"Function has {len(f)} points but {order} has {order.size}"
        )


def _value_array(f: LineFunction) -> np.ndarray:
    """Values as int64 when they fit, else as Python integers."""

    if f.range_bound <= _INT64_LIMIT:
        return np.asarray(f.values, dtype=np.int64)
    return np.asarray(f.values, dtype=object)


def _coordinates(order: PosetOrder) -> np.ndarray:
    """Row-major coordinates of every ground-set index, one row each."""

    indices = np.arange(order.size)
    if order.is_line:
        return indices[:, None]
    shape = (order.side,) * order.dimension
    return np.stack(np.unravel_index(indices, shape), axis=1)


def violation_rows(
    f: LineFunction, order: PosetOrder
) -> Iterator[Tuple[int, np.ndarray]]:
    """
    For every index ``x``, the sorted indices ``y`` violating with it.

    Only later indices can lie above ``x``, because the row-major index
    order extends the coordinatewise order. Rows without violations are
    skipped.

    Raises
    ------
    DomainError
        If ``f`` and ``order`` disagree on the ground-set size.
    """

    _check_size(f, order)
    values = _value_array(f)
    coords = None if order.is_line else _coordinates(order)

    for x in range(len(values) - 1):
        mask = values[x + 1 :] < values[x]
        if coords is not None:
            mask &= (coords[x + 1 :] >= coords[x]).all(axis=1)
        ys = np.flatnonzero(mask)
        if ys.size:
            yield x, ys + (x + 1)


def violating_pairs(
    f: LineFunction, order: Optional[PosetOrder] = None
) -> List[ViolationPair]:
    """
    All pairs ``x < y`` in the poset with ``f(x) > f(y)``.

    Parameters
    ----------
    f: LineFunction
        Values indexed by ground-set index.
    order: PosetOrder, optional
        Defaults to the line of ``f``'s length.

    Returns
    -------
    list of ViolationPair
        In lexicographic order of ``(x, y)``; points are integers on
        the line and coordinate tuples on a hypergrid.

    Raises
    ------
    DomainError
        If the sizes of ``f`` and ``order`` differ.

    Examples
    --------
    >>> from montest.distance import violating_pairs
    >>> from montest.functions import LineFunction, PosetOrder
    >>> violating_pairs(LineFunction([1, 0]))
    [ViolationPair(x=0, y=1)]
    >>> grid = PosetOrder.hypergrid(2, 2)
    >>> [tuple(p) for p in violating_pairs(LineFunction([1, 0, 0, 1]), grid)]
    [((0, 0), (0, 1)), ((0, 0), (1, 0))]
    """

    order = PosetOrder.line(len(f)) if order is None else order
    return [
        ViolationPair(order.point(x), order.point(int(y)))
        for x, ys in violation_rows(f, order)
        for y in ys
    ]


def _adjacency_masks(f: LineFunction, order: PosetOrder) -> List[int]:
    masks = [0] * order.size
    for x, ys in violation_rows(f, order):
        for y in ys:
            y = int(y)
            masks[x] |= 1 << y
            masks[y] |= 1 << x
    return masks


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _greedy_matching_size(adjacency: List[int], alive: int) -> int:
    matched = 0
    size = 0
    for v in _iter_bits(alive):
        if matched >> v & 1:
            continue
        free = adjacency[v] & alive & ~matched
        if free:
            u = (free & -free).bit_length() - 1
            matched |= (1 << v) | (1 << u)
            size += 1
    return size


def _min_vertex_cover(adjacency: List[int]) -> int:
    """
    Branch and bound for the minimum vertex cover of a small graph.

    Vertices are bits of an integer mask. Isolated vertices are dropped
    and degree-one vertices resolved by taking their neighbour; a greedy
    matching bounds each subtree from below. The search then branches on
    a vertex of largest degree: take it, or take all its neighbours.
    """

    everything = 0
    for v, neighbours in enumerate(adjacency):
        if neighbours:
            everything |= 1 << v
    best = popcount(everything)

    def search(alive: int, taken: int) -> None:
        nonlocal best

        reduced = True
        while reduced:
            reduced = False
            for v in _iter_bits(alive):
                if not alive >> v & 1:
                    continue
                neighbours = adjacency[v] & alive
                if not neighbours:
                    alive &= ~(1 << v)
                    reduced = True
                elif neighbours & (neighbours - 1) == 0:
                    alive &= ~((1 << v) | neighbours)
                    taken += 1
                    reduced = True

        if not alive:
            best = min(best, taken)
            return
        if taken + _greedy_matching_size(adjacency, alive) >= best:
            return

        pivot = max(
            _iter_bits(alive), key=lambda v: popcount(adjacency[v] & alive)
        )
        neighbours = adjacency[pivot] & alive
        search(alive & ~(1 << pivot), taken + 1)
        search(
            alive & ~neighbours & ~(1 << pivot), taken + popcount(neighbours)
        )

    search(everything, 0)
    return best


def _max_bipartite_matching(rows: List[List[int]], size: int) -> int:
    """Maximum matching, left copy to right copy, by BFS augmentation."""

    match_left = [-1] * size
    match_right = [-1] * size

    for root in range(size):
        if not rows[root]:
            continue
        parent = {}
        queue = deque([root])
        free = -1
        while queue and free < 0:
            left = queue.popleft()
            for right in rows[left]:
                if right in parent:
                    continue
                parent[right] = left
                if match_right[right] < 0:
                    free = right
                    break
                queue.append(match_right[right])

        while free >= 0:
            left = parent[free]
            previous = match_left[left]
            match_left[left] = free
            match_right[free] = left
            free = previous

    return sum(1 for right in match_left if right >= 0)


def distance_to_monotone_poset(
    f: LineFunction,
    order: PosetOrder,
    method: str = "branch-and-bound",
    cap: Optional[int] = None,
) -> int:
    """
    Exact distance to monotone on any supported poset.

    The distance is the size of a minimum vertex cover of the violation
    graph: deleting a cover leaves a violation-free partial function,
    which always extends monotonically into an unbounded total order.

    Parameters
    ----------
    f: LineFunction
        Values indexed by ground-set index.
    order: PosetOrder
    method: {"branch-and-bound", "matching"}
        ``branch-and-bound`` searches covers directly and is exponential,
        capped at ``settings.POSET_ORACLE_CAP`` points. ``matching`` uses
        that the violation relation is itself a strict partial order, so
        the minimum cover equals a maximum matching between two copies
        of the ground set (Dilworth and König); it is polynomial and
        capped at ``settings.MATCHING_ORACLE_CAP`` points.
    cap: int, optional
        Override the ground-set cap of the chosen method.

    Raises
    ------
    DomainError
        If the sizes of ``f`` and ``order`` differ.
    CapacityError
        If the ground set exceeds the cap.
    ValueError
        If ``method`` is unknown.

    Examples
    --------
    >>> from montest.distance import distance_to_monotone_poset
    >>> from montest.functions import LineFunction, PosetOrder
    >>> grid = PosetOrder.hypergrid(2, 2)
    >>> distance_to_monotone_poset(LineFunction([1, 0, 0, 1]), grid)
    1
    >>> f = LineFunction([3, 2, 1, 0])
    >>> distance_to_monotone_poset(f, PosetOrder.line(4), method="matching")
    3
    """

    if method not in POSET_METHODS:
        raise ValueError(
            f"Unknown poset method {method!r}, expected one of "
            f"{', '.join(POSET_METHODS)}"
        )
    if cap is None:
        cap = (
            settings.POSET_ORACLE_CAP
            if method == "branch-and-bound"
            else settings.MATCHING_ORACLE_CAP
        )
    _check_size(f, order)
    if order.size > cap:
        raise CapacityError(
            f"{order} has {order.size} points, above the {method} oracle "
            f"cap of {cap}"
        )

    logger.debug("Exact %s distance on %s", method, order)
    if method == "branch-and-bound":
        return _min_vertex_cover(_adjacency_masks(f, order))

    rows: List[List[int]] = [[] for _ in range(order.size)]
    for x, ys in violation_rows(f, order):
        rows[x] = ys.tolist()
    return _max_bipartite_matching(rows, order.size)


def greedy_disjoint_pairs(
    f: LineFunction, limit: Optional[int] = None
) -> List[ViolationPair]:
    """
    Remove adjacent inversions greedily until what is left is monotone.

    Scans the line once with a stack of surviving points. When the
    point on top of the stack is above the incoming point, the two are
    neighbours among the survivors, so both are removed as a pair.
    Everything strictly between a pair was removed by earlier pairs,
    so the ``i``-th pair spans a gap of at most ``2i - 1``.

    At least ``distance / 2`` pairs come out, since the survivors are
    monotone.

    Parameters
    ----------
    f: LineFunction
    limit: int, optional
        Stop after this many pairs.

    Returns
    -------
    list of ViolationPair
        In order of removal.

    Examples
    --------
    >>> from montest.distance import greedy_disjoint_pairs
    >>> from montest.functions import LineFunction
    >>> greedy_disjoint_pairs(LineFunction([3, 2, 1, 0]))
    [ViolationPair(x=0, y=1), ViolationPair(x=2, y=3)]
    >>> greedy_disjoint_pairs(LineFunction([2, 3, 0, 1]))
    [ViolationPair(x=1, y=2), ViolationPair(x=0, y=3)]
    """

    pairs: List[ViolationPair] = []
    stack: List[int] = []
    for z, value in enumerate(f):
        if limit is not None and len(pairs) >= limit:
            break
        if stack and f[stack[-1]] > value:
            pairs.append(ViolationPair(stack.pop(), z))
        else:
            stack.append(z)
    return pairs


def max_disjoint_violating_pairs(
    f: LineFunction, order: Optional[PosetOrder] = None
) -> List[ViolationPair]:
    """
    A maximal family of pairwise-disjoint violating pairs.

    Its size is a lower bound on the distance to monotone. On the line
    this is the greedy adjacent-removal certificate; on a hypergrid it
    is a greedy maximal matching of the violation graph, each point
    taking the first free point above it.

    Examples
    --------
    >>> from montest.distance import max_disjoint_violating_pairs
    >>> from montest.functions import LineFunction, PosetOrder
    >>> grid = PosetOrder.hypergrid(2, 2)
    >>> max_disjoint_violating_pairs(LineFunction([1, 0, 0, 1]), grid)
    [ViolationPair(x=(0, 0), y=(0, 1))]
    """

    if order is None or order.is_line:
        if order is not None:
            _check_size(f, order)
        return greedy_disjoint_pairs(f)

    used = np.zeros(order.size, dtype=bool)
    pairs = []
    for x, ys in violation_rows(f, order):
        if used[x]:
            continue
        free = ys[~used[ys]]
        if free.size:
            y = int(free[0])
            used[x] = used[y] = True
            pairs.append(ViolationPair(order.point(x), order.point(y)))
    return pairs
