#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Hard distributions: sampling, exact agreement probabilities, enumeration.

A distribution is named by a ``DistributionId``:

* ``mu``: the monotone distribution.
* ``nu-j:<j>``: ``mu`` with digit level ``j`` flipped.
* ``nu``: the uniform mixture of ``nu-j`` over all levels.
* ``mu-tilde``: ``ell`` independent ``mu`` blocks, block ``s`` offset
  by ``s * m**k``.
* ``nu-tilde:<t>:<j>``: ``mu-tilde`` with block ``t`` drawn from
  ``nu-j:<j>``.
* ``nu-tilde``: the uniform mixture of ``nu-tilde`` over all ``(t, j)``.

The plain distributions take ``MuParams`` and the tilde ones take
``ScaledParams``.
"""
from collections import Counter
from fractions import Fraction
from typing import (
    Dict,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)
import functools
import itertools
import logging
import re

import numpy as np

from montest import settings
from montest.errors import CapacityError, DomainError
from montest.functions import LineFunction, PartialAssignment
from montest.helpers import bit_at, prefix_node, product
from montest.instances.mu import (
    flip_mask,
    mu_from_seed,
    nu_j_from_seed,
    scaled_from_seeds,
)
from montest.instances.params import DigitSeed, MuParams, ScaledParams
from montest.ranks import to_digits


logger = logging.getLogger(__name__)

Params = Union[MuParams, ScaledParams]

MU = "mu"
NU = "nu"
MU_TILDE = "mu-tilde"
NU_TILDE = "nu-tilde"
TAGS = (MU, NU, MU_TILDE, NU_TILDE)

_r_distribution = re.compile(
    r"^(?P<tag>mu|nu|mu-tilde|nu-tilde)$"
    r"|^nu-j:(?P<j>\d+)$"
    r"|^nu-tilde:(?P<t>\d+):(?P<tj>\d+)$"
)


class DistributionId(NamedTuple):
    """
    Name of a hard distribution.

    Attributes
    ----------
    tag: str
        One of ``mu``, ``nu``, ``mu-tilde`` and ``nu-tilde``.
    j: int, optional
        Fixed flipped level of a ``nu`` or ``nu-tilde`` component.
    t: int, optional
        Fixed flipped block of a ``nu-tilde`` component.

    Examples
    --------
    >>> from montest.instances.distributions import DistributionId
    >>> str(DistributionId.nu(2)), str(DistributionId.nu_tilde(1, 0))
    ('nu-j:2', 'nu-tilde:1:0')
    >>> DistributionId.nu().is_mixture
    True
    """

    tag: str
    j: Optional[int] = None
    t: Optional[int] = None

    @classmethod
    def mu(cls) -> "DistributionId":
        return cls(MU)

    @classmethod
    def nu(cls, j: Optional[int] = None) -> "DistributionId":
        return cls(NU, j)

    @classmethod
    def mu_tilde(cls) -> "DistributionId":
        return cls(MU_TILDE)

    @classmethod
    def nu_tilde(
        cls, t: Optional[int] = None, j: Optional[int] = None
    ) -> "DistributionId":
        if (t is None) != (j is None):
            raise ValueError("nu-tilde components fix both t and j")
        return cls(NU_TILDE, j, t)

    @property
    def is_scaled(self) -> bool:
        """Whether the distribution lives on ``ScaledParams``."""

        return self.tag in (MU_TILDE, NU_TILDE)

    @property
    def is_mixture(self) -> bool:
        """Whether a level (and block) is still to be drawn."""

        return self.tag in (NU, NU_TILDE) and self.j is None

    @property
    def is_monotone(self) -> bool:
        return self.tag in (MU, MU_TILDE)

    def __str__(self) -> str:
        if self.tag == NU and self.j is not None:
            return f"nu-j:{self.j}"
        if self.tag == NU_TILDE and self.j is not None:
            return f"nu-tilde:{self.t}:{self.j}"
        return self.tag


def parse_distribution(name: str) -> DistributionId:
    """
    Parse a command-line distribution name.

    Raises
    ------
    ValueError
        If the name is not one of the known forms.

    Examples
    --------
    >>> from montest.instances.distributions import parse_distribution
    >>> parse_distribution("nu-tilde:1:0")
    DistributionId(tag='nu-tilde', j=0, t=1)
    >>> parse_distribution("nu-j:3")
    DistributionId(tag='nu', j=3, t=None)
    >>> parse_distribution("lambda")
    Traceback (most recent call last):
    ...
    ValueError: Unknown distribution 'lambda'
    """

    match = _r_distribution.match(name.strip())
    if match is None:
        raise ValueError(f"Unknown distribution {name!r}")
    if match.group("tag"):
        return DistributionId(match.group("tag"))
    if match.group("j") is not None:
        return DistributionId.nu(int(match.group("j")))
    return DistributionId.nu_tilde(
        int(match.group("t")), int(match.group("tj"))
    )


def validate(dist: DistributionId, params: Params) -> None:
    """
    Check that ``params`` suit ``dist`` and its fixed components.

    Raises
    ------
    TypeError
        If a tilde distribution gets ``MuParams`` or the other way round.
    DomainError
        If a fixed level or block is out of range.
    """

    expected = ScaledParams if dist.is_scaled else MuParams
    if not isinstance(params, expected):
        raise TypeError(
            f"Distribution {dist} needs {expected.__name__}, got "
            f"{type(params).__name__}"
        )
    if dist.tag not in TAGS:
        raise ValueError(f"Unknown distribution tag {dist.tag!r}")
    if dist.j is not None and not 0 <= dist.j < params.k:
        raise DomainError(f"Level j={dist.j} outside [0, {params.k})")
    if dist.t is not None and not 0 <= dist.t < params.ell:
        raise DomainError(f"Block t={dist.t} outside [0, {params.ell})")


def components(dist: DistributionId, params: Params) -> List[DistributionId]:
    """
    The equally weighted fixed distributions a mixture is made of.

    Examples
    --------
    >>> from montest.instances.distributions import components, DistributionId
    >>> from montest.instances.params import MuParams
    >>> [str(c) for c in components(DistributionId.nu(), MuParams(2, 5))]
    ['nu-j:0', 'nu-j:1']
    """

    validate(dist, params)
    if not dist.is_mixture:
        return [dist]
    if dist.tag == NU:
        return [DistributionId.nu(j) for j in range(params.k)]
    return [
        DistributionId.nu_tilde(t, j)
        for t in range(params.ell)
        for j in range(params.k)
    ]


def sample(
    dist: DistributionId, params: Params, rng: np.random.Generator
) -> LineFunction:
    """
    Draw one function from a hard distribution.

    Mixtures draw their component first: ``nu`` draws ``j`` uniformly
    from ``[k]``, ``nu-tilde`` draws ``(t, j)`` uniformly from the
    ``ell * k`` pairs. Then one seed is drawn per block.

    Parameters
    ----------
    dist: DistributionId
    params: MuParams or ScaledParams
    rng: numpy.random.Generator
        Caller-owned; see ``montest.helpers.derive_rng``.

    Examples
    --------
    >>> from montest.helpers import derive_rng
    >>> from montest.instances.distributions import DistributionId, sample
    >>> from montest.instances.params import MuParams
    >>> mu = DistributionId.mu()
    >>> sample(mu, MuParams(3, 5), derive_rng(1)) == sample(
    ...     mu, MuParams(3, 5), derive_rng(1)
    ... )
    True
    """

    validate(dist, params)
    j, t = dist.j, dist.t
    if dist.is_mixture and dist.tag == NU:
        j = int(rng.integers(params.k))
    elif dist.is_mixture:
        t, j = divmod(int(rng.integers(params.ell * params.k)), params.k)

    if not dist.is_scaled:
        seed = DigitSeed.random(params, rng)
        if dist.tag == MU:
            return mu_from_seed(params, seed)
        return nu_j_from_seed(params, seed, j)

    seeds = [DigitSeed.random(params.base, rng) for _ in range(params.ell)]
    flip = None if dist.tag == MU_TILDE else (t, j)
    return scaled_from_seeds(params, seeds, flip)


def _block_probability(
    entries: List[Tuple[int, int]], params: MuParams, j: Optional[int]
) -> Fraction:
    """
    Agreement probability of one block with ``mu`` or ``nu-j``.

    Agreeing at ``x`` pins ``a_s = digit_i(v) - bit_i(x')`` for every
    prefix ``s`` of ``x'`` of length ``i``, where ``x' = x`` under ``mu``
    and ``x' = x XOR 2**(k-1-j)`` under the level-``j`` flip.
    """

    k, m = params.k, params.m
    mask = 0 if j is None else flip_mask(params, j)
    pinned: Dict[int, int] = {}
    for x, value in entries:
        if not 0 <= value < params.range_bound:
            return Fraction(0)
        x ^= mask
        for level, digit in enumerate(to_digits(value, m, k)):
            a = digit - bit_at(x, level, k)
            if not 0 <= a <= m - 2:
                return Fraction(0)
            if pinned.setdefault(prefix_node(x, level, k), a) != a:
                return Fraction(0)
    return Fraction(1, (m - 1) ** len(pinned))


def split_assignment(
    alpha: PartialAssignment, scaled: ScaledParams
) -> Dict[int, List[Tuple[int, int]]]:
    """
    Split an assignment into per-block local entries.

    Block ``s`` gets ``(x - s * 2**k, alpha(x) - s * m**k)`` for every
    assigned ``x`` in the block. Local values may fall outside the
    block's range, in which case nothing from the distribution agrees.

    Examples
    --------
    >>> from montest.functions import PartialAssignment
    >>> from montest.instances.distributions import split_assignment
    >>> from montest.instances.params import ScaledParams
    >>> alpha = PartialAssignment({0: 1, 3: 9})
    >>> split_assignment(alpha, ScaledParams(2, 1, 5))
    {0: [(0, 1)], 1: [(1, 4)]}
    """

    alpha.check_domain(scaled.domain_size)
    blocks: Dict[int, List[Tuple[int, int]]] = {}
    for x, value in alpha.items():
        s, local = divmod(x, scaled.block_size)
        blocks.setdefault(s, []).append(
            (local, value - s * scaled.block_offset)
        )
    return blocks


def agreement_probability(
    alpha: PartialAssignment, dist: DistributionId, params: Params
) -> Fraction:
    """
    Exact probability that a draw from ``dist`` agrees with ``alpha``.

    Computed analytically from the digit constraints ``alpha`` puts on
    the seed: zero if any constraint is inconsistent or pins a digit
    outside ``[0, m - 2]``, else ``(m - 1) ** -c`` for ``c`` constrained
    prefixes. Mixtures average their components and tilde distributions
    multiply over blocks.

    Parameters
    ----------
    alpha: PartialAssignment
        Points must lie in the domain. Values at or above the range
        bound simply never agree.
    dist: DistributionId
    params: MuParams or ScaledParams

    Returns
    -------
    Fraction

    Examples
    --------
    >>> from montest.functions import PartialAssignment
    >>> from montest.instances.distributions import (
    ...     agreement_probability, DistributionId
    ... )
    >>> from montest.instances.params import MuParams
    >>> mu = DistributionId.mu()
    >>> agreement_probability(PartialAssignment({0: 6}), mu, MuParams(2, 4))
    Fraction(1, 9)
    >>> agreement_probability(PartialAssignment({0: 12}), mu, MuParams(2, 4))
    Fraction(0, 1)
    >>> agreement_probability(PartialAssignment(), mu, MuParams(2, 4))
    Fraction(1, 1)
    """

    parts = components(dist, params)
    if len(parts) > 1:
        total = sum(agreement_probability(alpha, c, params) for c in parts)
        return Fraction(total, len(parts))

    if not dist.is_scaled:
        alpha.check_domain(params.domain_size)
        return _block_probability(list(alpha.items()), params, dist.j)

    blocks = split_assignment(alpha, params)
    return Fraction(
        product(
            _block_probability(
                entries, params.base, dist.j if s == dist.t else None
            )
            for s, entries in blocks.items()
        )
    )


def support_size(dist: DistributionId, params: Params) -> int:
    """
    Number of weighted functions ``enumerate_distribution`` produces
    before merging duplicates.

    Examples
    --------
    >>> from montest.instances.distributions import (
    ...     DistributionId, support_size
    ... )
    >>> from montest.instances.params import MuParams
    >>> support_size(DistributionId.nu(), MuParams(3, 5))
    49152
    """

    parts = components(dist, params)
    ell = params.ell if dist.is_scaled else 1
    return len(parts) * (params.m - 1) ** (ell * ((1 << params.k) - 1))


def _iter_support(
    dist: DistributionId, params: Params
) -> Iterator[LineFunction]:
    for part in components(dist, params):
        if not part.is_scaled:
            for seed in DigitSeed.enumerate(params):
                if part.tag == MU:
                    yield mu_from_seed(params, seed)
                else:
                    yield nu_j_from_seed(params, seed, part.j)
            continue

        flip = None if part.tag == MU_TILDE else (part.t, part.j)
        seeds = list(DigitSeed.enumerate(params.base))
        for combo in itertools.product(seeds, repeat=params.ell):
            yield scaled_from_seeds(params, combo, flip)


def _check_capacity(dist: DistributionId, params: Params, cap: int) -> int:
    size = support_size(dist, params)
    if size > cap:
        raise CapacityError(
            f"Enumerating {dist} at {params} needs {size} functions, above "
            f"the cap of {cap}"
        )
    logger.debug("Enumerating %s functions of %s", size, dist)
    return size


def enumerate_distribution(
    dist: DistributionId,
    params: Params,
    cap: int = settings.ENUMERATION_CAP,
) -> List[Tuple[LineFunction, Fraction]]:
    """
    The full support of ``dist`` with exact weights summing to 1.

    Functions produced by several seeds are merged, keeping the order
    in which they first appear.

    Raises
    ------
    CapacityError
        If more than ``cap`` weighted functions would be generated.

    Examples
    --------
    >>> from montest.instances.distributions import (
    ...     DistributionId, enumerate_distribution
    ... )
    >>> from montest.instances.params import MuParams
    >>> support = enumerate_distribution(DistributionId.mu(), MuParams(1, 5))
    >>> [(list(f), w) for f, w in support][:2]
    [([0, 1], Fraction(1, 4)), ([1, 2], Fraction(1, 4))]
    """

    size = _check_capacity(dist, params, cap)
    counts = Counter(_iter_support(dist, params))
    return [(f, Fraction(count, size)) for f, count in counts.items()]


class SupportTable(NamedTuple):
    """
    A distribution's support as a matrix, for fast agreement counting.

    Row ``i`` of ``values`` is a support function drawn with multiplicity
    ``counts[i]`` out of ``total``.
    """

    values: np.ndarray
    counts: np.ndarray
    total: int

    def agreement(self, alpha: PartialAssignment) -> Fraction:
        """Weight of the rows agreeing with ``alpha``."""

        if alpha.points and alpha.points[-1] >= self.values.shape[1]:
            raise DomainError(
                f"Assignment point {alpha.points[-1]} outside the domain"
            )
        keep = np.ones(len(self.counts), dtype=bool)
        for x, value in alpha.items():
            keep &= self.values[:, x] == value
        return Fraction(int(self.counts[keep].sum()), self.total)


@functools.lru_cache(maxsize=settings.SUPPORT_TABLE_CACHE)
def support_table(
    dist: DistributionId,
    params: Params,
    cap: int = settings.ENUMERATION_CAP,
) -> SupportTable:
    """
    Cached ``SupportTable`` of ``enumerate_distribution``.

    Examples
    --------
    >>> from montest.functions import PartialAssignment
    >>> from montest.instances.distributions import (
    ...     DistributionId, support_table
    ... )
    >>> from montest.instances.params import MuParams
    >>> table = support_table(DistributionId.mu(), MuParams(2, 4))
    >>> table.agreement(PartialAssignment({0: 6}))
    Fraction(1, 9)
    """

    total = _check_capacity(dist, params, cap)
    counts = Counter(f.values for f in _iter_support(dist, params))
    dtype = np.int64 if params.range_bound <= 2 ** 63 else object
    values = np.array(list(counts), dtype=dtype)
    return SupportTable(
        values, np.array(list(counts.values()), dtype=np.int64), total
    )


def enumerated_agreement(
    alpha: PartialAssignment,
    dist: DistributionId,
    params: Params,
    cap: int = settings.ENUMERATION_CAP,
) -> Fraction:
    """
    Agreement probability by brute force over the enumerated support.

    Must equal ``agreement_probability`` whenever enumeration fits.
    """

    return support_table(dist, params, cap).agreement(alpha)


def restricted_distribution(
    dist: DistributionId,
    params: Params,
    points: Sequence[int],
    cap: int = settings.ENUMERATION_CAP,
) -> Dict[Tuple[int, ...], Fraction]:
    """
    Exact law of ``(f(x) for x in points)`` under ``dist``.

    Tuples outside the returned mapping have probability zero.

    Examples
    --------
    >>> from montest.instances.distributions import (
    ...     DistributionId, restricted_distribution
    ... )
    >>> from montest.instances.params import MuParams
    >>> law = restricted_distribution(DistributionId.mu(), MuParams(2, 4), [0])
    >>> len(law), law[(6,)]
    (9, Fraction(1, 9))
    """

    table = support_table(dist, params, cap)
    points = list(points)
    if points and max(points) >= table.values.shape[1]:
        raise DomainError(f"Point {max(points)} outside the domain")
    if not points:
        return {(): Fraction(1)}

    columns = table.values[:, points]
    if columns.dtype == object:
        weights: Counter = Counter()
        for row, count in zip(columns.tolist(), table.counts.tolist()):
            weights[tuple(int(v) for v in row)] += count
    else:
        rows, inverse = np.unique(columns, axis=0, return_inverse=True)
        sums = np.zeros(len(rows), dtype=np.int64)
        np.add.at(sums, inverse.reshape(-1), table.counts)
        weights = Counter(
            {
                tuple(int(v) for v in row): int(total)
                for row, total in zip(rows.tolist(), sums.tolist())
            }
        )
    return {
        values: Fraction(count, table.total)
        for values, count in sorted(weights.items())
    }
