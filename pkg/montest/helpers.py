#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Helper functions shared across montest."""
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, List, Tuple, TypeVar, Union
import functools
import math
import re

import numpy as np


_T = TypeVar("_T")
_R = TypeVar("_R")

Rational = Union[int, Fraction]

_r_fraction = re.compile(r"^\s*(\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_fraction(s_in: str) -> Fraction:
    """
    Parse an exact rational written as ``p/q`` or ``p``.

    Decimal points are refused on purpose: thresholds such as
    ``ceil(log2(eps * n))`` have to be computed exactly.

    Parameters
    ----------
    s_in: str
        String to parse.

    Returns
    -------
    Fraction
        The parsed value, reduced.

    Raises
    ------
    ValueError
        If the string is not a non-negative integer ratio, or the
        denominator is zero.

    Examples
    --------
    >>> from montest.helpers import parse_fraction
    >>> parse_fraction("1/8")
    Fraction(1, 8)
    >>> parse_fraction(" 6 / 4 ")
    Fraction(3, 2)
    >>> parse_fraction("1")
    Fraction(1, 1)
    >>> parse_fraction("0.5")
    Traceback (most recent call last):
    ...
    ValueError: Expected a rational of the form p/q, instead got: '0.5'
    """

    match = _r_fraction.match(s_in)
    if match is None:
        raise ValueError(
            f"Expected a rational of the form p/q, instead got: {s_in!r}"
        )
    numerator, denominator = match.groups()
    if denominator is not None and int(denominator) == 0:
        raise ValueError(f"Zero denominator in {s_in!r}")

    return Fraction(int(numerator), int(denominator or 1))


def ceil_log2(value: Rational) -> int:
    """
    Return the smallest ``L >= 0`` with ``2 ** L >= value``.

    Works on exact rationals, so ``ceil_log2(eps * n)`` never suffers
    from floating point rounding. Values at most 1 give 0.

    Examples
    --------
    >>> from fractions import Fraction
    >>> from montest.helpers import ceil_log2
    >>> ceil_log2(8)
    3
    >>> ceil_log2(9)
    4
    >>> ceil_log2(Fraction(9, 2))
    3
    >>> ceil_log2(Fraction(1, 3))
    0
    """

    value = Fraction(value)
    if value <= 1:
        return 0
    # 2 ** L >= p / q  <=>  2 ** L * q >= p
    level = max(0, (value.numerator // value.denominator).bit_length() - 1)
    while (1 << level) * value.denominator < value.numerator:
        level += 1
    return level


def popcount(mask: int) -> int:
    """
    Number of set bits of a non-negative integer.

    Examples
    --------
    >>> from montest.helpers import popcount
    >>> popcount(0b101101)
    4
    """

    return bin(mask).count("1")


def prefix_node(x: int, length: int, k: int) -> int:
    """
    Heap index of the length-``length`` binary prefix of ``x``.

    ``x`` is read as a ``k``-bit string, most significant bit first.
    Prefixes are numbered breadth first: the empty prefix is 0, and the
    children of node ``p`` are ``2p + 1`` (bit 0) and ``2p + 2`` (bit 1).

    Examples
    --------
    >>> from montest.helpers import prefix_node
    >>> prefix_node(0b101, 0, 3)
    0
    >>> prefix_node(0b101, 1, 3)
    2
    >>> prefix_node(0b101, 2, 3)
    5
    """

    return (1 << length) - 1 + (x >> (k - length))


def bit_at(x: int, index: int, k: int) -> int:
    """
    The ``index``-th bit of ``x`` as a ``k``-bit string, MSB first.

    Examples
    --------
    >>> from montest.helpers import bit_at
    >>> [bit_at(0b110, i, 3) for i in range(3)]
    [1, 1, 0]
    """

    return (x >> (k - 1 - index)) & 1


def derive_rng(base_seed: int, *spawn_key: int) -> np.random.Generator:
    """
    Derive an independent generator stream from a base seed.

    The stream for ``(base_seed, trial)`` is the one numpy's
    ``SeedSequence(base_seed).spawn`` would hand to child ``trial``,
    so trials can run in any order, or in parallel, and still draw the
    same numbers.

    Parameters
    ----------
    base_seed: int
        Non-negative base seed, usually from ``--seed``.
    spawn_key: int
        Zero or more non-negative integers naming the stream.

    Returns
    -------
    numpy.random.Generator

    Examples
    --------
    >>> from montest.helpers import derive_rng
    >>> a = derive_rng(7, 3).integers(1000, size=4)
    >>> b = derive_rng(7, 3).integers(1000, size=4)
    >>> bool((a == b).all())
    True
    """

    sequence = np.random.SeedSequence(base_seed, spawn_key=tuple(spawn_key))
    return np.random.default_rng(sequence)


def wilson_interval(
    successes: int, trials: int, z: float
) -> Tuple[float, float]:
    """
    Wilson score interval for a binomial proportion.

    Parameters
    ----------
    successes: int
    trials: int
        Must be positive.
    z: float
        Normal quantile, e.g. ``settings.CONFIDENCE_Z`` for 99%.

    Returns
    -------
    tuple of float
        ``(low, high)``, both in ``[0, 1]``.

    Examples
    --------
    >>> from montest.helpers import wilson_interval
    >>> low, high = wilson_interval(50, 100, 1.96)
    >>> round(low, 3), round(high, 3)
    (0.404, 0.596)
    """

    if trials <= 0:
        raise ValueError(f"Expected a positive number of trials: {trials}")

    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    spread = phat * (1 - phat) / trials + z * z / (4 * trials ** 2)
    half = z * math.sqrt(spread) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def run_ordered(
    func: Callable[[_T], _R], payloads: Iterable[_T], jobs: int = 1
) -> List[_R]:
    """
    Map ``func`` over ``payloads`` and return results in payload order.

    With ``jobs > 1`` the work is spread over a process pool; results
    are still collected by index, never by completion order. ``func``
    must be a module-level function so that it can be pickled.

    Examples
    --------
    >>> from montest.helpers import run_ordered
    >>> run_ordered(abs, [-3, 2, -1])
    [3, 2, 1]
    """

    payloads = list(payloads)
    if jobs <= 1 or len(payloads) <= 1:
        return [func(payload) for payload in payloads]

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, payloads))


def product(values: Iterable[Rational]) -> Rational:
    """
    Exact product of rationals; the empty product is 1.

    Examples
    --------
    >>> from fractions import Fraction
    >>> from montest.helpers import product
    >>> product([Fraction(1, 2), Fraction(2, 3), 3])
    Fraction(1, 1)
    >>> product([])
    1
    """

    return functools.reduce(lambda acc, value: acc * value, values, 1)
