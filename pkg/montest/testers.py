#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Monotonicity testers on the line, with exact query accounting.

Three testers share the ``BaseTester`` interface:

* ``ImprovedTester``: the non-adaptive, 1-sided tester making
  ``O(log(eps * n) / eps)`` queries. Each repetition draws ``x`` and
  compares it against the nearest multiples of ``2 ** i`` on both sides
  for every level ``i`` up to ``ceil(log2(eps * n))``.
* ``ErgunTester``: the classic binary-search spot checker with
  ``O(log(n) / eps)`` queries, kept as a baseline.
* ``ExhaustiveTester``: reads everything, exact.

All of them only ever reject with a genuinely violating pair.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Tuple
import logging
import math

import numpy as np

from montest import settings
from montest.distance import greedy_disjoint_pairs
from montest.errors import (
    CertificateError,
    ConfigurationError,
    DomainError,
    QueryBudgetExhausted,
)
from montest.functions import LineFunction, ViolationPair
from montest.helpers import Rational, ceil_log2, derive_rng


logger = logging.getLogger(__name__)


class QueryOracle:
    """
    Query access to a function, counting every query it answers.

    The transcript holds the ``(point, value)`` pairs in query order and
    the query count is its length. With ``memoize`` set, a point queried
    again is answered from memory and not counted again.

    Parameters
    ----------
    function: LineFunction
    memoize: bool, optional
    budget: int, optional
        Maximum number of counted queries; one more raises
        ``QueryBudgetExhausted``.

    Examples
    --------
    >>> from montest.functions import LineFunction
    >>> from montest.testers import QueryOracle
    >>> oracle = QueryOracle(LineFunction([4, 2, 9]))
    >>> oracle.query(1), oracle.query(1), oracle.query(2)
    (2, 2, 9)
    >>> oracle.queries, oracle.transcript
    (2, ((1, 2), (2, 9)))
    """

    def __init__(
        self,
        function: LineFunction,
        memoize: bool = True,
        budget: Optional[int] = None,
    ):
        self.function = function
        self.memoize = memoize
        self.budget = budget
        self._transcript: List[Tuple[int, int]] = []
        self._seen: Dict[int, int] = {}

    @property
    def n(self) -> int:
        return len(self.function)

    @property
    def queries(self) -> int:
        return len(self._transcript)

    @property
    def transcript(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(self._transcript)

    def query(self, x: int) -> int:
        """Return ``f(x)``, counting the query unless memoized."""

        if not 0 <= x < self.n:
            raise DomainError(f"Query {x} outside [0, {self.n})")
        if self.memoize and x in self._seen:
            return self._seen[x]
        if self.budget is not None and self.queries >= self.budget:
            raise QueryBudgetExhausted(
                f"Query budget of {self.budget} exhausted at point {x}"
            )

        value = self.function[x]
        self._seen[x] = value
        self._transcript.append((x, value))
        return value


@dataclass(frozen=True)
class TesterConfig:
    """
    Proximity parameter and repetition constant of a tester run.

    Attributes
    ----------
    eps: Fraction
        Proximity parameter in ``(0, 1]``, kept exact.
    c: int
        Repetitions are ``ceil(c / eps)``.
    seed: int
        Base seed used when a run is not handed a generator.

    Examples
    --------
    >>> from fractions import Fraction
    >>> from montest.testers import TesterConfig
    >>> TesterConfig(Fraction(1, 8)).repetitions
    48
    """

    eps: Fraction
    c: int = settings.ITERATION_CONSTANT
    seed: int = settings.DEFAULT_SEED

    def __post_init__(self):
        object.__setattr__(self, "eps", Fraction(self.eps))
        if not 0 < self.eps <= 1:
            raise ConfigurationError(
                f"eps must lie in (0, 1], got {self.eps}"
            )
        if self.c < 1:
            raise ConfigurationError(f"c must be positive, got {self.c}")

    @property
    def repetitions(self) -> int:
        return math.ceil(self.c / self.eps)

    def rng(self) -> np.random.Generator:
        return derive_rng(self.seed)


class Verdict(Enum):
    ACCEPT = "accept"
    REJECT = "reject"


class TesterReport(NamedTuple):
    """
    Outcome of one tester run.

    Attributes
    ----------
    verdict: Verdict
    queries: int
        Counted queries.
    witness: ViolationPair or None
        Present exactly when the verdict is a reject.
    transcript: tuple
        ``(point, value)`` pairs in query order.
    """

    verdict: Verdict
    queries: int
    witness: Optional[ViolationPair]
    transcript: Tuple[Tuple[int, int], ...]

    @property
    def rejected(self) -> bool:
        return self.verdict is Verdict.REJECT


def query_budget(
    n: int, eps: Rational, c: int = settings.ITERATION_CONSTANT
) -> int:
    """
    Worst-case query count of one improved tester run.

    ``ceil(c / eps) * (1 + 2 * (ceil(log2(eps * n)) + 1))``, counting
    repeated points every time.

    Examples
    --------
    >>> from fractions import Fraction
    >>> from montest.testers import query_budget
    >>> query_budget(1024, Fraction(1, 2))
    252
    """

    eps = Fraction(eps)
    levels = ceil_log2(eps * n)
    return math.ceil(c / eps) * (1 + 2 * (levels + 1))


def ergun_query_budget(
    n: int, eps: Rational, c: int = settings.ITERATION_CONSTANT
) -> int:
    """
    Worst-case query count of one binary-search checker run.

    Examples
    --------
    >>> from montest.testers import ergun_query_budget
    >>> ergun_query_budget(1024, 1)
    66
    """

    return math.ceil(c / Fraction(eps)) * (ceil_log2(n) + 1)


def scan_point(
    oracle: QueryOracle, n: int, x: int, levels: int
) -> Optional[ViolationPair]:
    """
    One repetition of the improved tester from a fixed point ``x``.

    For each level ``i`` in ``[0, levels]``, ``w`` is the largest
    multiple of ``2 ** i`` below ``x`` and ``y`` the smallest one above
    it. Neighbours outside ``[0, n)`` are skipped.

    Returns
    -------
    ViolationPair or None
        ``(w, x)`` or ``(x, y)`` for the first violation seen.

    Examples
    --------
    >>> from montest.functions import LineFunction
    >>> from montest.testers import QueryOracle, scan_point
    >>> f = LineFunction([0, 5, 2, 3])
    >>> scan_point(QueryOracle(f), 4, 2, 1)
    ViolationPair(x=1, y=2)
    >>> scan_point(QueryOracle(f), 4, 0, 1) is None
    True
    """

    fx = oracle.query(x)
    for level in range(levels + 1):
        step = 1 << level
        w = (x - 1) // step * step
        y = (x // step + 1) * step
        fw = oracle.query(w) if w >= 0 else None
        fy = oracle.query(y) if y < n else None
        if fw is not None and fw > fx:
            return ViolationPair(w, x)
        if fy is not None and fx > fy:
            return ViolationPair(x, y)
    return None


class BaseTester(ABC):
    """
    Base class of all testers.

    A subclass implements ``run``, which reads the function only
    through the given oracle and draws randomness only from ``rng``.
    Calling a tester on a ``LineFunction`` wraps it in a fresh
    memoizing oracle.
    """

    name = "base"

    def __init__(self, config: TesterConfig):
        self.config = config
        self.logger = logger.getChild(type(self).__name__)

    @abstractmethod
    def run(
        self, oracle: QueryOracle, rng: np.random.Generator
    ) -> TesterReport:
        """Run once against ``oracle``."""

    def budget(self, n: int) -> Optional[int]:
        """Worst-case queries on a domain of size ``n``, if bounded."""

        return None

    def __call__(
        self,
        function: LineFunction,
        rng: Optional[np.random.Generator] = None,
    ) -> TesterReport:
        rng = self.config.rng() if rng is None else rng
        return self.run(QueryOracle(function), rng)

    def _report(
        self, oracle: QueryOracle, witness: Optional[ViolationPair] = None
    ) -> TesterReport:
        verdict = Verdict.ACCEPT if witness is None else Verdict.REJECT
        self.logger.debug(
            "%s after %s queries, witness %s",
            verdict.value,
            oracle.queries,
            witness,
        )
        return TesterReport(
            verdict, oracle.queries, witness, oracle.transcript
        )


class ImprovedTester(BaseTester):
    """
    The ``O(log(eps * n) / eps)`` non-adaptive 1-sided tester.

    Needs ``eps * n >= 2``; below that, read everything with
    ``ExhaustiveTester``.

    Examples
    --------
    >>> from fractions import Fraction
    >>> from montest.functions import LineFunction
    >>> from montest.testers import ImprovedTester, TesterConfig
    >>> tester = ImprovedTester(TesterConfig(Fraction(1, 2)))
    >>> tester(LineFunction(range(64))).verdict.value
    'accept'
    >>> ImprovedTester(TesterConfig(1))(LineFunction([1, 0])).witness
    ViolationPair(x=0, y=1)
    """

    name = "improved"

    def levels(self, n: int) -> int:
        """``ceil(log2(eps * n))``, the highest level queried."""

        scale = self.config.eps * n
        if scale < 2:
            raise ConfigurationError(
                f"The improved tester needs eps * n >= 2, got "
                f"eps * n = {scale}; use the exhaustive tester instead"
            )
        return ceil_log2(scale)

    def budget(self, n: int) -> int:
        self.levels(n)
        return query_budget(n, self.config.eps, self.config.c)

    def run(
        self, oracle: QueryOracle, rng: np.random.Generator
    ) -> TesterReport:
        n = oracle.n
        levels = self.levels(n)
        for _ in range(self.config.repetitions):
            x = int(rng.integers(n))
            witness = scan_point(oracle, n, x, levels)
            if witness is not None:
                return self._report(oracle, witness)
        return self._report(oracle)


class ErgunTester(BaseTester):
    """
    Binary-search spot checker, the classic ``O(log(n) / eps)`` baseline.

    Each repetition draws ``x`` and binary searches for the key
    ``(f(x), x)`` among the keys ``(f(i), i)``, which are strictly
    increasing exactly when ``f`` is monotone. The search must keep
    ``x`` inside its window; the first query that pushes ``x`` out is a
    violating pair with ``x``.
    """

    name = "ergun"

    def budget(self, n: int) -> int:
        return ergun_query_budget(n, self.config.eps, self.config.c)

    @staticmethod
    def search(oracle: QueryOracle, x: int) -> Optional[ViolationPair]:
        """One binary search for ``x``'s key."""

        key = (oracle.query(x), x)
        lo, hi = 0, oracle.n
        while lo < hi:
            mid = (lo + hi) // 2
            mid_key = key if mid == x else (oracle.query(mid), mid)
            if mid_key < key:
                lo = mid + 1
                if lo > x:
                    return ViolationPair(x, mid)
            else:
                hi = mid
                if hi < x:
                    return ViolationPair(mid, x)
        return None

    def run(
        self, oracle: QueryOracle, rng: np.random.Generator
    ) -> TesterReport:
        for _ in range(self.config.repetitions):
            x = int(rng.integers(oracle.n))
            witness = self.search(oracle, x)
            if witness is not None:
                return self._report(oracle, witness)
        return self._report(oracle)


class ExhaustiveTester(BaseTester):
    """Query every point and reject on the first adjacent inversion."""

    name = "exhaustive"

    def budget(self, n: int) -> int:
        return n

    def run(
        self, oracle: QueryOracle, rng: np.random.Generator
    ) -> TesterReport:
        values = [oracle.query(x) for x in range(oracle.n)]
        for x in range(len(values) - 1):
            if values[x] > values[x + 1]:
                return self._report(oracle, ViolationPair(x, x + 1))
        return self._report(oracle)


class BudgetCappedTester(BaseTester):
    """
    Stop another tester after ``limit`` queries and accept.

    Parameters
    ----------
    tester: BaseTester
    limit: int
        Counted queries allowed per run.
    """

    def __init__(self, tester: BaseTester, limit: int):
        super().__init__(tester.config)
        if limit < 0:
            raise ConfigurationError(f"Query limit must be >= 0: {limit}")
        self.tester = tester
        self.limit = limit
        self.name = f"{tester.name}@{limit}"

    def budget(self, n: int) -> int:
        return self.limit

    def run(
        self, oracle: QueryOracle, rng: np.random.Generator
    ) -> TesterReport:
        previous, oracle.budget = oracle.budget, self.limit
        try:
            return self.tester.run(oracle, rng)
        except QueryBudgetExhausted:
            return self._report(oracle)
        finally:
            oracle.budget = previous


TESTERS = {
    cls.name: cls for cls in (ImprovedTester, ErgunTester, ExhaustiveTester)
}


def make_tester(
    name: str,
    eps: Rational,
    c: int = settings.ITERATION_CONSTANT,
    seed: int = settings.DEFAULT_SEED,
    limit: Optional[int] = None,
) -> BaseTester:
    """
    Build a tester by name, optionally capped at ``limit`` queries.

    Raises
    ------
    ValueError
        If ``name`` is unknown.

    Examples
    --------
    >>> from montest.testers import make_tester
    >>> make_tester("ergun", 1).name, make_tester("improved", 1, limit=2).name
    ('ergun', 'improved@2')
    """

    try:
        cls = TESTERS[name]
    except KeyError as exception:
        raise ValueError(
            f"Unknown tester {name!r}, expected one of {sorted(TESTERS)}"
        ) from exception

    tester = cls(TesterConfig(Fraction(eps), c, seed))
    if limit is not None:
        tester = BudgetCappedTester(tester, limit)
    return tester


def _run_checked(
    tester: BaseTester,
    oracle: QueryOracle,
    n: int,
    rng: Optional[np.random.Generator],
) -> TesterReport:
    if n != oracle.n:
        raise DomainError(f"n={n} but the oracle wraps {oracle.n} points")
    rng = tester.config.rng() if rng is None else rng
    return tester.run(oracle, rng)


def test_improved(
    oracle: QueryOracle,
    n: int,
    config: TesterConfig,
    rng: Optional[np.random.Generator] = None,
) -> TesterReport:
    """
    Run ``ImprovedTester`` once.

    Raises
    ------
    ConfigurationError
        If ``eps * n < 2``.
    """

    return _run_checked(ImprovedTester(config), oracle, n, rng)


def test_ergun(
    oracle: QueryOracle,
    n: int,
    config: TesterConfig,
    rng: Optional[np.random.Generator] = None,
) -> TesterReport:
    """Run ``ErgunTester`` once."""

    return _run_checked(ErgunTester(config), oracle, n, rng)


def test_exhaustive(
    oracle: QueryOracle, n: int, config: Optional[TesterConfig] = None
) -> TesterReport:
    """Run ``ExhaustiveTester`` once."""

    config = TesterConfig(1) if config is None else config
    return _run_checked(ExhaustiveTester(config), oracle, n, None)


# these are library entry points, not pytest cases
test_improved.__test__ = False
test_ergun.__test__ = False
test_exhaustive.__test__ = False


def find_disjoint_violating_pairs(
    f: LineFunction, eps: Rational
) -> List[ViolationPair]:
    """
    Certify farness with ``floor(eps * n / 2)`` disjoint violating pairs.

    Pairs come from removing neighbouring inversions greedily, so the
    ``i``-th pair spans a gap of at most ``2i - 1 <= eps * n``.

    Parameters
    ----------
    f: LineFunction
        Should be ``eps``-far from monotone.
    eps: Fraction

    Raises
    ------
    CertificateError
        If ``f`` is too close to monotone for the requested count.

    Examples
    --------
    >>> from fractions import Fraction
    >>> from montest.functions import LineFunction
    >>> from montest.testers import find_disjoint_violating_pairs
    >>> f = LineFunction([3, 2, 1, 0])
    >>> find_disjoint_violating_pairs(f, Fraction(3, 4))
    [ViolationPair(x=0, y=1)]
    """

    wanted = math.floor(Fraction(eps) * len(f) / 2)
    pairs = greedy_disjoint_pairs(f, limit=wanted)
    if len(pairs) < wanted:
        raise CertificateError(
            f"Found only {len(pairs)} of {wanted} disjoint violating pairs; "
            f"the function is not {eps}-far from monotone"
        )
    return pairs


def split_level(x: int, y: int) -> int:
    """
    Smallest ``i`` with exactly one multiple of ``2 ** i`` strictly
    between ``x`` and ``y``.

    Raises
    ------
    DomainError
        Unless ``0 <= x`` and ``x + 2 <= y``.

    Examples
    --------
    >>> from montest.testers import split_level
    >>> split_level(3, 5), split_level(1, 7)
    (0, 2)
    """

    if x < 0 or y < x + 2:
        raise DomainError(
            f"Need 0 <= x and x + 2 <= y for a split level, got ({x}, {y})"
        )
    level = 0
    while (y - 1) // (1 << level) - x // (1 << level) != 1:
        level += 1
    return level


def detecting_endpoints(
    f: LineFunction, pair: ViolationPair, eps: Rational
) -> List[int]:
    """
    Endpoints of ``pair`` from which a single improved-tester repetition
    rejects ``f``.
    """

    n = len(f)
    levels = ImprovedTester(TesterConfig(eps)).levels(n)
    return [
        z
        for z in (pair.x, pair.y)
        if scan_point(QueryOracle(f), n, z, levels) is not None
    ]
