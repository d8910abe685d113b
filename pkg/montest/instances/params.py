#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Parameters and digit seeds of the hard distributions."""
from collections.abc import Mapping as MappingABC
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence, Tuple
import itertools
import operator

import numpy as np

from montest import settings
from montest.errors import DomainError


@dataclass(frozen=True)
class MuParams:
    """
    Parameters of the monotone hard distribution and its perturbations.

    Attributes
    ----------
    k: int
        Number of digit levels, at least 1. The domain is ``[2 ** k]``.
    m: int
        Digit base. The range is ``[m ** k]``. Any base from
        ``settings.MIN_DIGIT_BASE`` (3) up is accepted so that small
        instances can be sampled and tested; the lemma checks in
        ``montest.verification`` need ``settings.LEMMA_MIN_BASE`` (5)
        and report ``SKIPPED`` below it.

    Examples
    --------
    >>> from montest.instances.params import MuParams
    >>> params = MuParams(2, 4)
    >>> params.domain_size, params.range_bound, params.seed_size
    (4, 16, 3)
    >>> MuParams.cubic(3)
    MuParams(k=3, m=27)
    """

    k: int
    m: int

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"Need at least one digit level, got k={self.k}")
        if self.m < settings.MIN_DIGIT_BASE:
            raise DomainError(
                f"Digit base must be at least {settings.MIN_DIGIT_BASE}, "
                f"got m={self.m}"
            )

    @classmethod
    def cubic(cls, k: int) -> "MuParams":
        """The regime ``m = k ** 3`` the lower bound is stated for."""

        return cls(k, max(k ** 3, settings.MIN_DIGIT_BASE))

    @property
    def domain_size(self) -> int:
        return 1 << self.k

    @property
    def range_bound(self) -> int:
        return self.m ** self.k

    @property
    def seed_size(self) -> int:
        """Number of binary prefixes of length below ``k``."""

        return (1 << self.k) - 1

    @property
    def lemma_ready(self) -> bool:
        """Whether ``m`` is large enough for the lemma checks."""

        return self.m >= settings.LEMMA_MIN_BASE


@dataclass(frozen=True)
class ScaledParams:
    """
    Parameters of the block-concatenated distributions at ``eps = 1/(2l)``.

    Block ``s`` of the domain is ``[s * 2**k, (s + 1) * 2**k)`` and its
    values are offset by ``s * m**k``.

    Examples
    --------
    >>> from montest.instances.params import ScaledParams
    >>> scaled = ScaledParams(2, 1, 5)
    >>> scaled.eps, scaled.domain_size, scaled.range_bound
    (Fraction(1, 4), 4, 10)
    """

    ell: int
    k: int
    m: int

    def __post_init__(self):
        if self.ell < 1:
            raise DomainError(f"Need at least one block, got ell={self.ell}")
        # validates k and m
        MuParams(self.k, self.m)

    @property
    def base(self) -> MuParams:
        """Parameters of a single block."""

        return MuParams(self.k, self.m)

    @property
    def eps(self) -> Fraction:
        return Fraction(1, 2 * self.ell)

    @property
    def block_size(self) -> int:
        return 1 << self.k

    @property
    def block_offset(self) -> int:
        """Value offset between consecutive blocks."""

        return self.m ** self.k

    @property
    def domain_size(self) -> int:
        return self.ell * self.block_size

    @property
    def range_bound(self) -> int:
        return self.ell * self.block_offset


def prefix_string(node: int) -> str:
    """
    Binary prefix named by a heap node.

    Examples
    --------
    >>> from montest.instances.params import prefix_string
    >>> [prefix_string(node) for node in range(4)]
    ['', '0', '1', '00']
    """

    length = (node + 1).bit_length() - 1
    if length == 0:
        return ""
    return format(node + 1 - (1 << length), f"0{length}b")


def prefix_node_of(prefix: str) -> int:
    """Inverse of ``prefix_string``."""

    if prefix and set(prefix) - {"0", "1"}:
        raise DomainError(f"Not a binary prefix: {prefix!r}")
    return (1 << len(prefix)) - 1 + (int(prefix, 2) if prefix else 0)


class DigitSeed(MappingABC):
    """
    The digits ``a_s``, one per binary prefix ``s`` shorter than ``k``.

    Stored in heap order: node 0 is the empty prefix and the children of
    node ``p`` are ``2p + 1`` and ``2p + 2``. As a mapping it is keyed
    by the prefixes themselves.

    Parameters
    ----------
    digits: sequence of int
        ``2 ** k - 1`` digits in heap order.

    Examples
    --------
    >>> from montest.instances.params import DigitSeed
    >>> seed = DigitSeed.from_mapping({"": 1, "0": 2, "1": 1})
    >>> seed.k, seed["0"], seed.node(2)
    (2, 2, 1)
    >>> list(seed)
    ['', '0', '1']
    """

    __slots__ = ("_digits", "_k")

    def __init__(self, digits: Sequence[int]):
        self._digits: Tuple[int, ...] = tuple(map(operator.index, digits))
        size = len(self._digits)
        k = (size + 1).bit_length() - 1
        if size < 1 or (1 << k) - 1 != size:
            raise DomainError(
                f"A digit seed has 2**k - 1 entries, got {size}"
            )
        self._k = k

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, int]) -> "DigitSeed":
        """
        Build a seed from a prefix to digit mapping.

        Raises
        ------
        DomainError
            If a prefix is missing or malformed.
        """

        nodes = {prefix_node_of(prefix): a for prefix, a in mapping.items()}
        size = len(nodes)
        missing = [
            prefix_string(node) for node in range(size) if node not in nodes
        ]
        if missing:
            raise DomainError(f"Digit seed is missing prefixes {missing}")
        return cls([nodes[node] for node in range(size)])

    @classmethod
    def random(
        cls, params: MuParams, rng: np.random.Generator
    ) -> "DigitSeed":
        """Draw every digit independently and uniformly from ``[0, m-2]``."""

        return cls(rng.integers(0, params.m - 1, size=params.seed_size))

    @classmethod
    def enumerate(cls, params: MuParams) -> Iterator["DigitSeed"]:
        """All ``(m - 1) ** (2**k - 1)`` seeds, lexicographically."""

        digits = range(params.m - 1)
        for combo in itertools.product(digits, repeat=params.seed_size):
            yield cls(combo)

    @property
    def k(self) -> int:
        return self._k

    @property
    def digits(self) -> Tuple[int, ...]:
        """Digits in heap order."""

        return self._digits

    def node(self, index: int) -> int:
        """Digit of the prefix with the given heap index."""

        return self._digits[index]

    def level(self, length: int) -> Tuple[int, ...]:
        """Digits of all prefixes of one length, in prefix order."""

        return self._digits[(1 << length) - 1 : (1 << (length + 1)) - 1]

    def check(self, params: MuParams) -> None:
        """
        Raise ``DomainError`` unless the seed is complete for ``params``.
        """

        if self._k != params.k:
            raise DomainError(
                f"Seed covers {self._k} levels but k={params.k}"
            )
        bad = [a for a in self._digits if not 0 <= a <= params.m - 2]
        if bad:
            raise DomainError(
                f"Seed digits must lie in [0, {params.m - 2}], got {bad}"
            )

    def __getitem__(self, prefix: str) -> int:
        node = prefix_node_of(prefix)
        if node >= len(self._digits):
            raise KeyError(prefix)
        return self._digits[node]

    def __iter__(self) -> Iterator[str]:
        return (prefix_string(node) for node in range(len(self._digits)))

    def __len__(self) -> int:
        return len(self._digits)

    def __eq__(self, other) -> bool:
        if isinstance(other, DigitSeed):
            return self._digits == other._digits
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._digits)

    def __repr__(self) -> str:
        return f"DigitSeed({list(self._digits)})"
