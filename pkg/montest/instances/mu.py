#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Functions of the monotone distribution and its level flips."""
from typing import Optional, Sequence, Tuple

import numpy as np

from montest.errors import DomainError
from montest.functions import LineFunction
from montest.helpers import bit_at
from montest.instances.params import DigitSeed, MuParams, ScaledParams


def _value_dtype(range_bound: int):
    return np.int64 if range_bound <= 2 ** 63 else object


def mu_value(params: MuParams, seed: DigitSeed, x: int) -> int:
    """
    A single value of the function a seed determines, in ``O(k)``.

    Digit ``i`` of ``f(x)`` is ``a_s + b`` where ``s`` is the length
    ``i`` prefix of ``x`` and ``b`` is bit ``i`` of ``x``.

    Examples
    --------
    >>> from montest.instances.mu import mu_value
    >>> from montest.instances.params import DigitSeed, MuParams
    >>> seed = DigitSeed([1, 2, 1])
    >>> [mu_value(MuParams(2, 4), seed, x) for x in range(4)]
    [6, 7, 9, 10]
    """

    if not 0 <= x < params.domain_size:
        raise DomainError(f"Point {x} outside [0, {params.domain_size})")

    value = 0
    node = 0
    for i in range(params.k):
        bit = bit_at(x, i, params.k)
        value = value * params.m + seed.node(node) + bit
        node = 2 * node + 1 + bit
    return value


def mu_from_seed(params: MuParams, seed: DigitSeed) -> LineFunction:
    """
    The monotone function a digit seed determines.

    Built one digit level at a time: every value of the current level
    spawns a bit-0 child ``v * m + a_s`` and a bit-1 child
    ``v * m + a_s + 1``.

    Parameters
    ----------
    params: MuParams
    seed: DigitSeed

    Returns
    -------
    LineFunction
        On ``[2 ** k]`` with range bound ``m ** k``.

    Raises
    ------
    DomainError
        If the seed does not fit ``params``.

    Examples
    --------
    >>> from montest.instances.mu import mu_from_seed
    >>> from montest.instances.params import DigitSeed, MuParams
    >>> list(mu_from_seed(MuParams(2, 4), DigitSeed([1, 2, 1])))
    [6, 7, 9, 10]
    >>> list(mu_from_seed(MuParams(1, 5), DigitSeed([0])))
    [0, 1]
    """

    seed.check(params)
    values = np.zeros(1, dtype=_value_dtype(params.range_bound))
    for length in range(params.k):
        spawned = values * params.m + np.asarray(
            seed.level(length), dtype=values.dtype
        )
        values = np.empty(2 * len(spawned), dtype=values.dtype)
        values[0::2] = spawned
        values[1::2] = spawned + 1
    return LineFunction(values.tolist(), params.range_bound)


def mu_from_seed_recursive(params: MuParams, seed: DigitSeed) -> LineFunction:
    """
    The same function built bottom-up by block concatenation.

    At recursion depth ``i`` two functions ``f_0, f_1`` on ``[2 ** i]``
    combine into ``a * m**i + f_0`` followed by ``(a + 1) * m**i + f_1``,
    where ``a`` is the digit of the prefix of length ``k - 1 - i``. The
    recursion starts from the single-point function ``0``.

    Examples
    --------
    >>> from montest.instances.mu import mu_from_seed_recursive
    >>> from montest.instances.params import DigitSeed, MuParams
    >>> list(mu_from_seed_recursive(MuParams(1, 5), DigitSeed([3])))
    [3, 4]
    """

    seed.check(params)
    blocks = [[0] for _ in range(params.domain_size)]
    for depth in range(params.k):
        scale = params.m ** depth
        digits = seed.level(params.k - 1 - depth)
        blocks = [
            [a * scale + v for v in low] + [(a + 1) * scale + v for v in high]
            for a, low, high in zip(digits, blocks[0::2], blocks[1::2])
        ]
    return LineFunction(blocks[0], params.range_bound)


def flip_mask(params: MuParams, j: int) -> int:
    """The XOR mask that flips bit ``j`` (bit 0 is the most significant)."""

    if not 0 <= j < params.k:
        raise DomainError(f"Level j={j} outside [0, {params.k})")
    return 1 << (params.k - 1 - j)


def nu_j_from_seed(params: MuParams, seed: DigitSeed, j: int) -> LineFunction:
    """
    The level-``j`` flip ``g(x) = f(x XOR 2**(k-1-j))`` of a seed's function.

    Equivalently digit ``j`` of every value becomes ``a_s + (1 - b)``.

    Raises
    ------
    DomainError
        If ``j`` is outside ``[0, k)`` or the seed does not fit.

    Examples
    --------
    >>> from montest.instances.mu import nu_j_from_seed
    >>> from montest.instances.params import DigitSeed, MuParams
    >>> list(nu_j_from_seed(MuParams(2, 4), DigitSeed([1, 2, 1]), 0))
    [9, 10, 6, 7]
    >>> list(nu_j_from_seed(MuParams(1, 5), DigitSeed([2]), 0))
    [3, 2]
    """

    mask = flip_mask(params, j)
    f = mu_from_seed(params, seed)
    return LineFunction((f[x ^ mask] for x in range(len(f))), f.range_bound)


def scaled_from_seeds(
    scaled: ScaledParams,
    seeds: Sequence[DigitSeed],
    flip: Optional[Tuple[int, int]] = None,
) -> LineFunction:
    """
    Concatenate ``ell`` blocks, block ``s`` offset by ``s * m**k``.

    Parameters
    ----------
    scaled: ScaledParams
    seeds: sequence of DigitSeed
        One seed per block.
    flip: tuple of int, optional
        ``(t, j)``: block ``t`` uses the level-``j`` flip instead.

    Examples
    --------
    >>> from montest.instances.mu import scaled_from_seeds
    >>> from montest.instances.params import DigitSeed, ScaledParams
    >>> seeds = [DigitSeed([1]), DigitSeed([3])]
    >>> list(scaled_from_seeds(ScaledParams(2, 1, 5), seeds))
    [1, 2, 8, 9]
    >>> list(scaled_from_seeds(ScaledParams(2, 1, 5), seeds, flip=(0, 0)))
    [2, 1, 8, 9]
    """

    if len(seeds) != scaled.ell:
        raise DomainError(f"Expected {scaled.ell} seeds, got {len(seeds)}")
    if flip is not None and not 0 <= flip[0] < scaled.ell:
        raise DomainError(f"Block t={flip[0]} outside [0, {scaled.ell})")

    base = scaled.base
    values = []
    for s, seed in enumerate(seeds):
        if flip is not None and flip[0] == s:
            block = nu_j_from_seed(base, seed, flip[1])
        else:
            block = mu_from_seed(base, seed)
        offset = s * scaled.block_offset
        values.extend(offset + v for v in block)
    return LineFunction(values, scaled.range_bound)
