#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Regrouping line indices into hypergrid points."""
from typing import Dict, Tuple

from montest.errors import DomainError
from montest.functions import LineFunction, PosetOrder


def hypergrid_order(d: int, b: int) -> PosetOrder:
    """The hypergrid ``[2 ** b] ** d``."""

    if b < 1:
        raise DomainError(f"Need at least one bit per axis, got b={b}")
    return PosetOrder.hypergrid(1 << b, d)


def grid_point(x: int, d: int, b: int) -> Tuple[int, ...]:
    """
    Split the ``d * b`` bits of ``x`` into ``d`` groups of ``b`` bits.

    The most significant group becomes the first coordinate.

    Raises
    ------
    DomainError
        If ``x`` is outside ``[0, 2 ** (d * b))``.

    Examples
    --------
    >>> from montest.instances.grid import grid_point
    >>> grid_point(0b110100, 3, 2)
    (3, 1, 0)
    >>> grid_point(0, 4, 1)
    (0, 0, 0, 0)
    """

    point = hypergrid_order(d, b).point(x)
    return point if isinstance(point, tuple) else (point,)


def grid_index(point: Tuple[int, ...], b: int) -> int:
    """
    Inverse of ``grid_point``.

    Examples
    --------
    >>> from montest.instances.grid import grid_index
    >>> bin(grid_index((3, 1, 0), 2))
    '0b110100'
    """

    order = hypergrid_order(len(point), b)
    return order.index(point if len(point) > 1 else point[0])


def embed_on_hypergrid(
    f: LineFunction, d: int, b: int
) -> Dict[Tuple[int, ...], int]:
    """
    View a function on ``[2 ** (d * b)]`` as a function on the hypergrid.

    A pair of line points differing in a single bit stays ordered the
    same way on the hypergrid, so single-bit violations survive.

    Raises
    ------
    DomainError
        If ``f`` does not have exactly ``2 ** (d * b)`` points.

    Examples
    --------
    >>> from montest.functions import LineFunction
    >>> from montest.instances.grid import embed_on_hypergrid
    >>> embed_on_hypergrid(LineFunction([0, 1, 2, 3]), 2, 1)
    {(0, 0): 0, (0, 1): 1, (1, 0): 2, (1, 1): 3}
    """

    order = hypergrid_order(d, b)
    if len(f) != order.size:
        raise DomainError(
            f"Function has {len(f)} points, {order} needs {order.size}"
        )
    return {grid_point(x, d, b): value for x, value in enumerate(f)}
