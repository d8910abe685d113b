#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Finite checks of every claim behind the lower-bound construction.

Each ``check_*`` function checks one case and each ``sweep_*`` function
runs many, exhaustively on small parameters and on seeded random cases
otherwise. Both return a ``LemmaCheckResult`` whose counterexample, if
any, reproduces the failure deterministically.
"""
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)
import itertools
import logging
import math
import warnings

import numpy as np

from montest import settings
from montest.distance import distance_to_monotone_line
from montest.errors import ConfigurationError, DomainError
from montest.functions import PartialAssignment
from montest.helpers import derive_rng, run_ordered, wilson_interval
from montest.instances.distributions import (
    DistributionId,
    Params,
    agreement_probability,
    enumerated_agreement,
    restricted_distribution,
    sample,
    support_size,
)
from montest.instances.mu import flip_mask, nu_j_from_seed
from montest.instances.params import DigitSeed, MuParams, ScaledParams
from montest.ranks import RankLike, to_digits
from montest.reports import TrialFrame
from montest.testers import BaseTester, BudgetCappedTester, QueryOracle


logger = logging.getLogger(__name__)


class ValueClass(Enum):
    GOOD = "good"
    BAD = "bad"


def classify_value(v: RankLike, k: int, m: int) -> ValueClass:
    """
    Good iff all ``k`` base-``m`` digits, leading zeros included, lie in
    ``[1, m - 2]``.

    Raises
    ------
    DomainError
        If ``v`` is not below ``m ** k``.

    Examples
    --------
    >>> from montest.verification import classify_value
    >>> classify_value(0, 2, 4).value, classify_value(21, 3, 4).value
    ('bad', 'good')
    >>> classify_value(7, 2, 4).value
    'bad'
    """

    digits = to_digits(int(v), m, k)
    if all(1 <= digit <= m - 2 for digit in digits):
        return ValueClass.GOOD
    return ValueClass.BAD


def is_good_assignment(alpha: PartialAssignment, k: int, m: int) -> bool:
    """Whether every value in the image of ``alpha`` is good."""

    return all(
        classify_value(value, k, m) is ValueClass.GOOD
        for value in alpha.values()
    )


class _UnionFind:
    def __init__(self, elements: Iterable[int]):
        self.parent = {x: x for x in elements}

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        """Merge the sets of ``x`` and ``y``; False if already merged."""

        fx, fy = self.find(x), self.find(y)
        if fx == fy:
            return False
        self.parent[fy] = fx
        return True


class CutReport(NamedTuple):
    """
    The indices an assignment cuts, with one witness edge per index.

    Attributes
    ----------
    weight: int
        Number of assigned points.
    cut: frozenset of int
        Cut indices.
    edges: tuple
        ``(j, x, y)`` for every cut index ``j``: the first pair, in
        lexicographic order, cutting ``j``.
    acyclic: bool
        Whether the witness edges form a forest on the points.
    """

    weight: int
    cut: FrozenSet[int]
    edges: Tuple[Tuple[int, int, int], ...]
    acyclic: bool


def cut_index(x: int, y: int, k: int) -> int:
    """
    The index cut by the pair ``x != y``: the first bit they differ in.

    Examples
    --------
    >>> from montest.verification import cut_index
    >>> cut_index(0b001, 0b011, 3), cut_index(0b000, 0b100, 3)
    (1, 0)
    """

    return k - (x ^ y).bit_length()


def cut_indices(
    alpha: Union[PartialAssignment, Iterable[int]], k: int
) -> CutReport:
    """
    All indices cut by pairs of assigned points.

    A pair ``x < y`` cuts ``j`` when the two share their first ``j``
    bits and differ in bit ``j``.

    Parameters
    ----------
    alpha: PartialAssignment or iterable of int
        The assignment, or just its points.
    k: int
        Bit width of the points.

    Examples
    --------
    >>> from montest.verification import cut_indices
    >>> sorted(cut_indices([0b001, 0b011], 3).cut)
    [1]
    >>> report = cut_indices([0b000, 0b011, 0b100], 3)
    >>> sorted(report.cut), report.acyclic
    ([0, 1], True)
    """

    points = sorted(set(alpha))
    if points and (points[0] < 0 or points[-1] >= 1 << k):
        raise DomainError(f"Points must lie in [0, {1 << k}): {points}")

    witnesses: Dict[int, Tuple[int, int]] = {}
    for x, y in itertools.combinations(points, 2):
        witnesses.setdefault(cut_index(x, y, k), (x, y))

    forest = _UnionFind(points)
    acyclic = all(forest.union(x, y) for x, y in witnesses.values())
    edges = tuple((j, x, y) for j, (x, y) in sorted(witnesses.items()))
    return CutReport(len(points), frozenset(witnesses), edges, acyclic)


def tight_cut_assignment(k: int, t: int) -> Tuple[int, ...]:
    """
    ``t`` points cutting exactly ``t - 1`` indices, for ``1 <= t <= k + 1``.

    The points are ``0`` and ``2 ** (k - 1 - j)`` for ``j < t - 1``; the
    pair of ``0`` with the ``j``-th of them cuts ``j``.

    Examples
    --------
    >>> from montest.verification import cut_indices, tight_cut_assignment
    >>> tight_cut_assignment(4, 3)
    (0, 4, 8)
    >>> sorted(cut_indices(tight_cut_assignment(4, 3), 4).cut)
    [0, 1]
    """

    if not 1 <= t <= k + 1:
        raise DomainError(f"Need 1 <= t <= k + 1, got t={t}, k={k}")
    return tuple(sorted({0} | {1 << (k - 1 - j) for j in range(t - 1)}))


class Outcome(Enum):
    VERIFIED = "verified"
    COUNTEREXAMPLE = "counterexample"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class LemmaCheckResult:
    """
    Outcome of checking one lemma on one case or a sweep of cases.

    Attributes
    ----------
    lemma: str
    params: dict
    outcome: Outcome
    cases: int
        Cases actually checked.
    skipped: int
        Cases the lemma does not apply to.
    counterexample: dict, optional
        Enough to rebuild the failing case.
    detail: dict
        Lemma-specific numbers, e.g. exact probabilities as strings.
    """

    lemma: str
    params: Dict[str, Any]
    outcome: Outcome
    cases: int = 1
    skipped: int = 0
    counterexample: Optional[Dict[str, Any]] = None
    detail: Dict[str, Any] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.outcome is Outcome.COUNTEREXAMPLE

    def as_dict(self) -> Dict[str, Any]:
        result = asdict(self)
        result["outcome"] = self.outcome.value
        return result


def _params_dict(params: Params) -> Dict[str, int]:
    if isinstance(params, ScaledParams):
        return {"ell": params.ell, "k": params.k, "m": params.m}
    return {"k": params.k, "m": params.m}


def _skipped(
    lemma: str,
    params: Dict[str, Any],
    reason: str,
    level: int = logging.WARNING,
):
    logger.log(level, "Skipping %s at %s: %s", lemma, params, reason)
    return LemmaCheckResult(
        lemma, params, Outcome.SKIPPED, 0, 1, detail={"reason": reason}
    )


def _alpha_payload(alpha: PartialAssignment) -> Dict[str, Any]:
    return {"points": list(alpha.points), "values": list(alpha.image())}


def _combine(
    lemma: str,
    params: Dict[str, Any],
    results: Iterable[LemmaCheckResult],
    detail: Optional[Dict[str, Any]] = None,
) -> LemmaCheckResult:
    """Fold per-case results, stopping at the first counterexample."""

    cases = skipped = 0
    for result in results:
        cases += result.cases
        skipped += result.skipped
        if result.failed:
            return replace(
                result, params=params, cases=cases, skipped=skipped
            )
    outcome = Outcome.VERIFIED if cases else Outcome.SKIPPED
    if skipped:
        logger.warning(
            "%s at %s: %s of %s cases skipped",
            lemma,
            params,
            skipped,
            cases + skipped,
        )
    return LemmaCheckResult(
        lemma, params, outcome, cases, skipped, None, detail or {}
    )


def check_cut_lemma(
    k: int,
    weight: int,
    trials: int,
    rng: np.random.Generator,
    exhaustive: Optional[bool] = None,
) -> LemmaCheckResult:
    """
    Weight-``t`` point sets cut at most ``t - 1`` indices, acyclically.

    Runs over all point sets when ``exhaustive`` (by default when
    ``2 ** k <= settings.CUT_EXHAUSTIVE_DOMAIN``), else over ``trials``
    random ones.
    """

    n = 1 << k
    if not 1 <= weight <= n:
        raise DomainError(f"Need 1 <= weight <= {n}, got {weight}")
    if exhaustive is None:
        exhaustive = n <= settings.CUT_EXHAUSTIVE_DOMAIN

    if exhaustive:
        point_sets: Iterable[Sequence[int]] = itertools.combinations(
            range(n), weight
        )
    else:
        point_sets = (
            rng.choice(n, size=weight, replace=False).tolist()
            for _ in range(trials)
        )

    params = {"k": k, "weight": weight, "exhaustive": exhaustive}
    cases = 0
    for points in point_sets:
        cases += 1
        report = cut_indices(points, k)
        if len(report.cut) > weight - 1 or not report.acyclic:
            return LemmaCheckResult(
                "cut",
                params,
                Outcome.COUNTEREXAMPLE,
                cases,
                counterexample={"points": sorted(points)},
                detail={"cut": sorted(report.cut)},
            )
    return LemmaCheckResult("cut", params, Outcome.VERIFIED, cases)


def check_cut_tightness(k: int) -> LemmaCheckResult:
    """For every ``t <= k``, some weight-``t`` set cuts ``t - 1`` indices."""

    params = {"k": k}
    for t in range(1, k + 1):
        points = tight_cut_assignment(k, t)
        if len(cut_indices(points, k).cut) != t - 1:
            return LemmaCheckResult(
                "cut-tight",
                params,
                Outcome.COUNTEREXAMPLE,
                t,
                counterexample={"points": list(points)},
            )
    return LemmaCheckResult("cut-tight", params, Outcome.VERIFIED, k)


def _enumeration_fits(
    dists: Sequence[DistributionId], params: Params, cap: int
) -> bool:
    return all(support_size(dist, params) <= cap for dist in dists)


def check_goodalpha(
    params: MuParams,
    alpha: PartialAssignment,
    j: int,
    cap: int = settings.ENUMERATION_CAP,
) -> LemmaCheckResult:
    """
    A good ``alpha`` not cutting ``j`` agrees with ``mu`` and ``nu-j``
    with exactly the same probability.

    Both sides are computed analytically and, when the supports fit
    under ``cap``, by brute force over the enumerated supports; all
    four numbers must coincide.

    Returns
    -------
    LemmaCheckResult
        ``SKIPPED`` when ``alpha`` is not good, cuts ``j``, or ``m`` is
        below ``settings.LEMMA_MIN_BASE``.

    Raises
    ------
    DomainError
        If ``j`` is outside ``[0, k)``.

    Examples
    --------
    >>> from montest.functions import PartialAssignment
    >>> from montest.instances.params import MuParams
    >>> from montest.verification import check_goodalpha
    >>> result = check_goodalpha(MuParams(2, 5), PartialAssignment({0: 7}), 1)
    >>> result.outcome.value, result.detail["mu"], result.detail["nu"]
    ('verified', '1/16', '1/16')
    """

    flip_mask(params, j)
    lemma = "goodalpha"
    case = dict(_params_dict(params), j=j)
    if not params.lemma_ready:
        return _skipped(lemma, case, f"m below {settings.LEMMA_MIN_BASE}")
    if not is_good_assignment(alpha, params.k, params.m):
        return _skipped(lemma, case, "assignment is not good", logging.DEBUG)
    if j in cut_indices(alpha, params.k).cut:
        return _skipped(lemma, case, f"assignment cuts j={j}", logging.DEBUG)

    mu, nu = DistributionId.mu(), DistributionId.nu(j)
    values = [
        agreement_probability(alpha, mu, params),
        agreement_probability(alpha, nu, params),
    ]
    enumerated = _enumeration_fits((mu, nu), params, cap)
    if enumerated:
        values.append(enumerated_agreement(alpha, mu, params, cap))
        values.append(enumerated_agreement(alpha, nu, params, cap))

    detail = {
        "mu": str(values[0]),
        "nu": str(values[1]),
        "enumerated": enumerated,
    }
    if len(set(values)) != 1:
        detail["all"] = [str(value) for value in values]
        return LemmaCheckResult(
            lemma,
            case,
            Outcome.COUNTEREXAMPLE,
            counterexample=dict(_alpha_payload(alpha), j=j),
            detail=detail,
        )
    return LemmaCheckResult(lemma, case, Outcome.VERIFIED, detail=detail)


def check_goodalpha_points(
    params: MuParams,
    points: Sequence[int],
    j: int,
    cap: int = settings.ENUMERATION_CAP,
) -> LemmaCheckResult:
    """
    ``check_goodalpha`` for every good assignment on ``points`` at once.

    The exact laws of ``f`` restricted to ``points`` under ``mu`` and
    ``nu-j`` are read off the enumerated supports and must coincide on
    every tuple of good values. Good tuples missing from both supports
    have probability zero on both sides.

    Returns
    -------
    LemmaCheckResult
        ``cases`` counts the good tuples with non-zero probability on
        either side.

    Examples
    --------
    >>> from montest.instances.params import MuParams
    >>> from montest.verification import check_goodalpha_points
    >>> result = check_goodalpha_points(MuParams(2, 5), (0, 3), 0)
    >>> result.outcome.value, result.cases > 0
    ('verified', True)
    """

    flip_mask(params, j)
    lemma = "goodalpha"
    points = tuple(sorted(int(x) for x in points))
    case = dict(_params_dict(params), j=j, points=list(points))
    if not params.lemma_ready:
        return _skipped(lemma, case, f"m below {settings.LEMMA_MIN_BASE}")
    if j in cut_indices(points, params.k).cut:
        return _skipped(lemma, case, f"points cut j={j}", logging.DEBUG)

    mu_law = restricted_distribution(DistributionId.mu(), params, points, cap)
    nu_law = restricted_distribution(
        DistributionId.nu(j), params, points, cap
    )
    good = sorted(
        values
        for values in set(mu_law) | set(nu_law)
        if all(
            classify_value(value, params.k, params.m) is ValueClass.GOOD
            for value in values
        )
    )
    zero = Fraction(0)
    for values in good:
        pr_mu, pr_nu = mu_law.get(values, zero), nu_law.get(values, zero)
        if pr_mu != pr_nu:
            return LemmaCheckResult(
                lemma,
                case,
                Outcome.COUNTEREXAMPLE,
                counterexample={
                    "points": list(points),
                    "values": list(values),
                    "j": j,
                },
                detail={"mu": str(pr_mu), "nu": str(pr_nu)},
            )
    logger.debug("goodalpha on %s, j=%s: %s tuples", points, j, len(good))
    return LemmaCheckResult(lemma, case, Outcome.VERIFIED, cases=len(good))


def nu_agreement(params: MuParams, alpha: PartialAssignment) -> Fraction:
    """Agreement with ``nu`` as the average over the ``k`` levels."""

    total = sum(
        agreement_probability(alpha, DistributionId.nu(j), params)
        for j in range(params.k)
    )
    return Fraction(total, params.k)


def check_claim_good(
    params: MuParams, alpha: PartialAssignment
) -> LemmaCheckResult:
    """
    A good ``alpha`` of weight at most ``k / 2`` satisfies
    ``P_mu[agree] <= 2 * P_nu[agree]``, exactly.

    Examples
    --------
    >>> from montest.functions import PartialAssignment
    >>> from montest.instances.params import MuParams
    >>> from montest.verification import check_claim_good
    >>> check_claim_good(MuParams(4, 5), PartialAssignment()).detail
    {'mu': '1', 'nu': '1'}
    """

    lemma = "claim-good"
    case = _params_dict(params)
    if not params.lemma_ready:
        return _skipped(lemma, case, f"m below {settings.LEMMA_MIN_BASE}")
    if 2 * alpha.weight > params.k:
        return _skipped(lemma, case, "weight above k/2", logging.DEBUG)
    if not is_good_assignment(alpha, params.k, params.m):
        return _skipped(lemma, case, "assignment is not good", logging.DEBUG)

    pr_mu = agreement_probability(alpha, DistributionId.mu(), params)
    pr_nu = nu_agreement(params, alpha)
    detail = {"mu": str(pr_mu), "nu": str(pr_nu)}
    if pr_mu > 2 * pr_nu:
        return LemmaCheckResult(
            lemma,
            case,
            Outcome.COUNTEREXAMPLE,
            counterexample=_alpha_payload(alpha),
            detail=detail,
        )
    return LemmaCheckResult(lemma, case, Outcome.VERIFIED, detail=detail)


def count_bad_elements(alpha: PartialAssignment, scaled: ScaledParams) -> int:
    """Image values that are bad once reduced modulo ``m ** k``."""

    return sum(
        classify_value(value % scaled.block_offset, scaled.k, scaled.m)
        is ValueClass.BAD
        for value in alpha.values()
    )


def check_claim_good_scaled(
    scaled: ScaledParams, alpha: PartialAssignment
) -> LemmaCheckResult:
    """
    The block version of ``check_claim_good``.

    Applies to ``alpha`` of weight at most ``ell * k / 4`` with at most
    ``ell / 4`` bad values, and checks
    ``P_mu_tilde[agree] <= 2 * P_nu_tilde[agree]`` exactly.
    """

    lemma = "claim-good-scaled"
    case = _params_dict(scaled)
    if not scaled.base.lemma_ready:
        return _skipped(lemma, case, f"m below {settings.LEMMA_MIN_BASE}")
    if 4 * alpha.weight > scaled.ell * scaled.k:
        return _skipped(lemma, case, "weight above ell*k/4", logging.DEBUG)
    if 4 * count_bad_elements(alpha, scaled) > scaled.ell:
        return _skipped(
            lemma, case, "more than ell/4 bad values", logging.DEBUG
        )

    pr_mu = agreement_probability(alpha, DistributionId.mu_tilde(), scaled)
    pr_nu = agreement_probability(alpha, DistributionId.nu_tilde(), scaled)
    detail = {"mu": str(pr_mu), "nu": str(pr_nu)}
    if pr_mu > 2 * pr_nu:
        return LemmaCheckResult(
            lemma,
            case,
            Outcome.COUNTEREXAMPLE,
            counterexample=_alpha_payload(alpha),
            detail=detail,
        )
    return LemmaCheckResult(lemma, case, Outcome.VERIFIED, detail=detail)


def good_values(params: MuParams) -> List[int]:
    """
    All good range values, ascending: ``(m - 2) ** k`` of them.

    Examples
    --------
    >>> from montest.instances.params import MuParams
    >>> from montest.verification import good_values
    >>> good_values(MuParams(2, 4))
    [5, 6, 9, 10]
    """

    digits = range(1, params.m - 1)
    return [
        sum(d * params.m ** (params.k - 1 - i) for i, d in enumerate(combo))
        for combo in itertools.product(digits, repeat=params.k)
    ]


def good_assignments(
    params: MuParams,
    points: Sequence[int],
    pool: Optional[Sequence[int]] = None,
) -> Iterator[PartialAssignment]:
    """
    Every assignment of values from ``pool`` to ``points``.

    ``pool`` defaults to all good values, so every assignment is good.
    """

    pool = good_values(params) if pool is None else pool
    for values in itertools.product(pool, repeat=len(points)):
        yield PartialAssignment(dict(zip(points, values)))


def sample_good_assignments(
    params: MuParams,
    points: Sequence[int],
    count: int,
    rng: np.random.Generator,
) -> List[PartialAssignment]:
    """
    Good restrictions of random ``mu`` and ``nu-j`` draws to ``points``.

    Uniformly random good values almost never agree with anything;
    restrictions of actual draws do, so both sides of the lemmas are
    exercised with non-zero probabilities. Gives up after ``50 * count``
    draws.
    """

    dists = [DistributionId.mu()]
    dists += [DistributionId.nu(j) for j in range(params.k)]
    found: List[PartialAssignment] = []
    for _ in range(50 * count):
        if len(found) >= count:
            break
        dist = dists[int(rng.integers(len(dists)))]
        f = sample(dist, params, rng)
        alpha = PartialAssignment({x: f[x] for x in points})
        if is_good_assignment(alpha, params.k, params.m):
            found.append(alpha)
    return found


def _point_sets(
    n: int,
    weights: Iterable[int],
    trials: int,
    rng: np.random.Generator,
    exhaustive: bool,
) -> Iterator[Tuple[int, ...]]:
    weights = [weight for weight in weights if weight <= n]
    if not weights:
        return
    if exhaustive:
        for weight in weights:
            yield from itertools.combinations(range(n), weight)
        return
    for _ in range(trials):
        weight = weights[int(rng.integers(len(weights)))]
        points = rng.choice(n, size=weight, replace=False)
        yield tuple(sorted(int(x) for x in points))


def _assignments(
    params: MuParams,
    points: Sequence[int],
    exhaustive: bool,
    per_set: int,
    rng: np.random.Generator,
) -> Iterable[PartialAssignment]:
    if exhaustive:
        return good_assignments(params, points)
    return sample_good_assignments(params, points, per_set, rng)


def sweep_goodalpha(
    params: MuParams,
    max_weight: int,
    trials: int,
    rng: np.random.Generator,
    exhaustive: bool = False,
    per_set: int = 4,
    cap: int = settings.ENUMERATION_CAP,
) -> LemmaCheckResult:
    """
    ``check_goodalpha`` over point sets of size at most ``max_weight``
    and every level they do not cut.

    Exhaustively, every point set and every good assignment on it is
    checked. Otherwise ``trials`` random point sets each get
    ``per_set`` sampled good assignments.
    """

    def cases():
        for points in _point_sets(
            params.domain_size,
            range(1, max_weight + 1),
            trials,
            rng,
            exhaustive,
        ):
            cut = cut_indices(points, params.k).cut
            uncut = [j for j in range(params.k) if j not in cut]
            if not uncut:
                continue
            for alpha in _assignments(
                params, points, exhaustive, per_set, rng
            ):
                for j in uncut:
                    yield check_goodalpha(params, alpha, j, cap)

    case = dict(
        _params_dict(params), max_weight=max_weight, exhaustive=exhaustive
    )
    if not params.lemma_ready:
        return _skipped("goodalpha", case, "m too small")
    return _combine("goodalpha", case, cases())


def sweep_claim_good(
    params: MuParams,
    trials: int,
    rng: np.random.Generator,
    exhaustive: bool = False,
    per_set: int = 4,
    max_weight: Optional[int] = None,
) -> LemmaCheckResult:
    """``check_claim_good`` over good assignments of weight <= k/2."""

    max_weight = params.k // 2 if max_weight is None else max_weight

    def cases():
        for points in _point_sets(
            params.domain_size,
            range(1, max_weight + 1),
            trials,
            rng,
            exhaustive,
        ):
            for alpha in _assignments(
                params, points, exhaustive, per_set, rng
            ):
                yield check_claim_good(params, alpha)

    case = dict(
        _params_dict(params), max_weight=max_weight, exhaustive=exhaustive
    )
    if not params.lemma_ready or max_weight < 1:
        return _skipped("claim-good", case, "no applicable weights")
    return _combine("claim-good", case, cases())


def sweep_claim_good_scaled(
    scaled: ScaledParams,
    trials: int,
    rng: np.random.Generator,
    per_set: int = 4,
) -> LemmaCheckResult:
    """
    ``check_claim_good_scaled`` on restrictions of ``mu-tilde`` and
    ``nu-tilde`` draws to random point sets of weight <= ell*k/4.
    """

    max_weight = scaled.ell * scaled.k // 4
    dists = (DistributionId.mu_tilde(), DistributionId.nu_tilde())

    def cases():
        for points in _point_sets(
            scaled.domain_size, range(1, max_weight + 1), trials, rng, False
        ):
            for _ in range(per_set):
                f = sample(dists[int(rng.integers(2))], scaled, rng)
                alpha = PartialAssignment({x: f[x] for x in points})
                yield check_claim_good_scaled(scaled, alpha)

    case = dict(_params_dict(scaled), max_weight=max_weight)
    if not scaled.base.lemma_ready or max_weight < 1:
        return _skipped("claim-good-scaled", case, "no applicable weights")
    return _combine("claim-good-scaled", case, cases())


class BadHitEstimate(NamedTuple):
    """
    Monte Carlo estimate of how often ``q`` random queries see a bad
    value of a ``mu`` draw.

    Attributes
    ----------
    hits: int
        Trials in which some queried value was bad.
    trials: int
    estimate: float
    sigma: float
        Standard error of ``estimate``.
    bound: float
        ``q * k * 2 / (m - 1)``.
    interval: tuple of float
        99% Wilson interval of the hit probability.
    informative: bool
        False when ``bound >= 1`` and the check holds vacuously.
    holds: bool
        ``estimate <= bound + sigmas * sigma``.
    """

    hits: int
    trials: int
    estimate: float
    sigma: float
    bound: float
    interval: Tuple[float, float]
    informative: bool
    holds: bool


def _bad_hits(
    params: MuParams, q: int, batch: int, rng: np.random.Generator
) -> int:
    """
    Count batch trials whose ``q`` distinct random points hit a bad value.

    A value has a bad digit ``i`` exactly when the digit ``a`` of its
    length-``i`` prefix is 0 with bit 0, or ``m - 2`` with bit 1.
    """

    k, m, n = params.k, params.m, params.domain_size
    seeds = rng.integers(0, m - 1, size=(batch, params.seed_size))
    points = np.argpartition(rng.random((batch, n)), q - 1, axis=1)[:, :q]

    bad = np.zeros((batch, q), dtype=bool)
    for level in range(k):
        bits = (points >> (k - 1 - level)) & 1
        nodes = (1 << level) - 1 + (points >> (k - level))
        digits = np.take_along_axis(seeds, nodes, axis=1)
        low = (digits == 0) & (bits == 0)
        high = (digits == m - 2) & (bits == 1)
        bad |= low | high
    return int(bad.any(axis=1).sum())


def estimate_bad_hit(
    params: MuParams,
    q: int,
    trials: int,
    rng: np.random.Generator,
    sigmas: float = settings.BAD_HIT_SIGMAS,
) -> BadHitEstimate:
    """
    Estimate the chance that ``q`` distinct uniform queries to ``f ~ mu``
    see a bad value, and compare it to ``q * k * 2 / (m - 1)``.

    Random queries are a weaker searcher than the best adaptive one
    the bound is stated for, so this is a sanity check of the bound.
    A bound of 1 or more holds vacuously and is flagged as not
    informative, with a ``RuntimeWarning``.

    Examples
    --------
    >>> from montest.helpers import derive_rng
    >>> from montest.instances.params import MuParams
    >>> from montest.verification import estimate_bad_hit
    >>> result = estimate_bad_hit(MuParams(4, 2 ** 20), 2, 100, derive_rng(0))
    >>> result.holds, result.informative
    (True, True)
    """

    if not 1 <= q <= params.domain_size:
        raise DomainError(
            f"Need 1 <= q <= {params.domain_size} queries, got {q}"
        )
    if trials < 1:
        raise DomainError(f"Need at least one trial, got {trials}")

    batch_size = max(1, 2 ** 21 // params.domain_size)
    hits = 0
    for start in range(0, trials, batch_size):
        batch = min(batch_size, trials - start)
        hits += _bad_hits(params, q, batch, rng)

    estimate = hits / trials
    sigma = math.sqrt(estimate * (1 - estimate) / trials)
    bound = q * params.k * 2 / (params.m - 1)
    informative = bound < 1
    if not informative:
        message = (
            f"Bad-leaf bound {bound:.3f} >= 1 at k={params.k}, "
            f"m={params.m}, q={q}; the check holds vacuously"
        )
        logger.warning(message)
        warnings.warn(message, RuntimeWarning)

    return BadHitEstimate(
        hits,
        trials,
        estimate,
        sigma,
        bound,
        wilson_interval(hits, trials, settings.CONFIDENCE_Z),
        informative,
        estimate <= bound + sigmas * sigma,
    )


def check_claim_bad(
    params: MuParams,
    trials: int,
    rng: np.random.Generator,
    q: Optional[int] = None,
) -> LemmaCheckResult:
    """``estimate_bad_hit`` with ``q = k / 2`` queries by default."""

    q = max(1, params.k // 2) if q is None else q
    result = estimate_bad_hit(params, q, trials, rng)
    case = dict(_params_dict(params), q=q, trials=trials)
    detail = result._asdict()
    detail["interval"] = list(result.interval)
    outcome = Outcome.VERIFIED if result.holds else Outcome.COUNTEREXAMPLE
    return LemmaCheckResult("claim-bad", case, outcome, trials, detail=detail)


def check_nonmonotone(
    params: MuParams,
    trials: int,
    rng: np.random.Generator,
    exhaustive: bool = False,
) -> LemmaCheckResult:
    """
    Every level flip is far from monotone.

    For each seed (all of them when ``exhaustive``) and each level
    ``j``, the ``2 ** (k - 1)`` pairs ``(x, x + 2 ** (k - 1 - j))`` with
    bit ``j`` of ``x`` clear must all violate, and the exact distance
    must be at least ``2 ** (k - 1)``. The smallest distance seen is
    reported, since only the lower bound is guaranteed.
    """

    if exhaustive:
        seeds: Iterable[DigitSeed] = DigitSeed.enumerate(params)
    else:
        seeds = (DigitSeed.random(params, rng) for _ in range(trials))

    half = params.domain_size // 2
    case = dict(_params_dict(params), exhaustive=exhaustive)
    cases = 0
    smallest = None
    for seed in seeds:
        for j in range(params.k):
            cases += 1
            g = nu_j_from_seed(params, seed, j)
            mask = flip_mask(params, j)
            violated = sum(
                g[x] > g[x | mask]
                for x in range(params.domain_size)
                if not x & mask
            )
            distance = distance_to_monotone_line(g)
            if smallest is None or distance < smallest:
                smallest = distance
            if violated < half or distance < half:
                return LemmaCheckResult(
                    "nonmonotone",
                    case,
                    Outcome.COUNTEREXAMPLE,
                    cases,
                    counterexample={"seed": list(seed.digits), "j": j},
                    detail={"violated": violated, "distance": distance},
                )
    return LemmaCheckResult(
        "nonmonotone",
        case,
        Outcome.VERIFIED,
        cases,
        detail={"min_distance": smallest, "half": half},
    )


class GapReport(NamedTuple):
    """
    Acceptance rates of a tester on the two sides of a hard pair.

    Attributes
    ----------
    accept_mu: float
    accept_nu: float
    gap: float
        ``accept_mu - accept_nu``.
    mean_queries: float
    max_queries: int
    records: list of dict
        One per trial, in trial order.
    """

    accept_mu: float
    accept_nu: float
    gap: float
    mean_queries: float
    max_queries: int
    records: List[Dict[str, Any]]


def default_pair(params: Params) -> Tuple[DistributionId, DistributionId]:
    """``(mu, nu)``, or their tilde versions for ``ScaledParams``."""

    if isinstance(params, ScaledParams):
        return DistributionId.mu_tilde(), DistributionId.nu_tilde()
    return DistributionId.mu(), DistributionId.nu()


def _gap_trial(payload) -> Dict[str, Any]:
    tester, dist, params, base_seed, side, trial = payload
    rng = derive_rng(base_seed, side, trial)
    f = sample(dist, params, rng)
    report = tester.run(QueryOracle(f), rng)
    return {
        "side": ("mu", "nu")[side],
        "distribution": str(dist),
        "trial": trial,
        "verdict": report.verdict.value,
        "queries": report.queries,
    }


def distinguishing_experiment(
    tester: BaseTester,
    params: Params,
    trials: int,
    base_seed: int = settings.DEFAULT_SEED,
    dist_pair: Optional[Tuple[DistributionId, DistributionId]] = None,
    budget: Optional[int] = None,
    jobs: int = 1,
) -> GapReport:
    """
    Run ``tester`` on ``trials`` draws from each side of a hard pair.

    Trial ``i`` of side ``s`` (0 for the monotone side, 1 for the far
    side) draws its function and its coins from
    ``derive_rng(base_seed, s, i)``, so results do not depend on
    ``jobs``. Mixing both sides half and half is the uniform mixture
    the lower bound argues about.

    Parameters
    ----------
    tester: BaseTester
    params: MuParams or ScaledParams
    trials: int
        Trials per side.
    base_seed: int
    dist_pair: tuple of DistributionId, optional
        Defaults to ``default_pair(params)``.
    budget: int, optional
        Cap the tester at this many queries, accepting when it runs out.
    jobs: int
        Worker processes.

    Raises
    ------
    ConfigurationError
        If ``trials < 1``.
    """

    if trials < 1:
        raise ConfigurationError(
            f"Need at least one trial per side, got {trials}"
        )
    dist_pair = default_pair(params) if dist_pair is None else dist_pair
    if budget is not None:
        tester = BudgetCappedTester(tester, budget)
    payloads = [
        (tester, dist, params, base_seed, side, trial)
        for side, dist in enumerate(dist_pair)
        for trial in range(trials)
    ]
    records = run_ordered(_gap_trial, payloads, jobs)
    if budget is not None:
        for record in records:
            record["budget"] = budget

    row = TrialFrame(records).gap_aggregates()[0]
    logger.info(
        "%s: accept %.3f on %s, %.3f on %s",
        tester.name,
        row["accept_mu"],
        dist_pair[0],
        row["accept_nu"],
        dist_pair[1],
    )
    return GapReport(
        row["accept_mu"],
        row["accept_nu"],
        row["gap"],
        row["mean_queries"],
        row["max_queries"],
        records,
    )
