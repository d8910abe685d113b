#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from fractions import Fraction
import pytest
from montest import testers
from montest.distance import distance_to_monotone_line
from montest.errors import (
    CertificateError,
    ConfigurationError,
    DomainError,
    QueryBudgetExhausted,
)
from montest.functions import LineFunction
from montest.helpers import derive_rng, wilson_interval
from montest.instances.distributions import DistributionId, sample
from montest.instances.params import MuParams
from montest.testers import (
    BudgetCappedTester,
    ErgunTester,
    ExhaustiveTester,
    ImprovedTester,
    QueryOracle,
    TesterConfig,
    Verdict,
    detecting_endpoints,
    ergun_query_budget,
    find_disjoint_violating_pairs,
    make_tester,
    scan_point,
    query_budget,
    split_level,
)


def test_query_oracle_counts_and_caps():
    """Assert the oracle counts distinct queries and honours its budget."""

    f = LineFunction([3, 1, 4, 1, 5])
    oracle = QueryOracle(f, budget=2)

    assert oracle.query(0) == 3 and oracle.query(0) == 3
    assert oracle.query(4) == 5
    assert oracle.queries == 2
    with pytest.raises(QueryBudgetExhausted):
        oracle.query(1)
    with pytest.raises(DomainError):
        oracle.query(5)

    plain = QueryOracle(f, memoize=False)
    plain.query(2)
    plain.query(2)
    assert plain.queries == 2


def test_tester_config_is_exact():
    """Assert eps is kept as a fraction and validated."""

    config = TesterConfig(Fraction(1, 3), c=2)

    assert config.repetitions == 6
    assert TesterConfig(1).eps == Fraction(1)
    for eps in (0, Fraction(3, 2), -1):
        with pytest.raises(ConfigurationError):
            TesterConfig(eps)
    with pytest.raises(ConfigurationError):
        TesterConfig(Fraction(1, 2), c=0)


def test_improved_tester_needs_eps_n_at_least_two():
    """Assert the improved tester refuses eps * n < 2."""

    tester = ImprovedTester(TesterConfig(Fraction(1, 8)))
    with pytest.raises(ConfigurationError):
        tester(LineFunction(range(15)))
    assert tester(LineFunction(range(16))).verdict is Verdict.ACCEPT


def test_testers_always_accept_monotone_functions():
    """Assert every tester accepts mu draws and sorted arrays."""

    rng = derive_rng(40)
    config = TesterConfig(Fraction(1, 4))
    all_testers = [
        ImprovedTester(config),
        ErgunTester(config),
        ExhaustiveTester(config),
    ]
    for m in (5, 40, 1000):
        params = MuParams(10, m)
        for _ in range(5):
            f = sample(DistributionId.mu(), params, rng)
            for tester in all_testers:
                report = tester.run(QueryOracle(f), rng)
                assert report.verdict is Verdict.ACCEPT
                assert report.witness is None

    for _ in range(20):
        values = sorted(rng.integers(0, 10, size=100).tolist())
        for tester in all_testers:
            assert not tester(LineFunction(values), rng).rejected


def test_rejections_carry_genuine_witnesses():
    """Assert every reject comes with a pair that really violates."""

    rng = derive_rng(41)
    config = TesterConfig(Fraction(1, 2))
    for tester in (ImprovedTester(config), ErgunTester(config)):
        for _ in range(50):
            f = LineFunction(rng.integers(0, 20, size=64).tolist())
            report = tester.run(QueryOracle(f), rng)
            if report.rejected:
                x, y = report.witness
                assert x < y and f[x] > f[y]
                queried = dict(report.transcript)
                assert queried[x] == f[x] and queried[y] == f[y]


def test_improved_tester_rejects_nu_with_high_probability():
    """Assert the improved tester rejects nu draws at least 2/3 of the time."""

    params = MuParams(8, 5)
    tester = ImprovedTester(TesterConfig(Fraction(1, 2)))
    trials = 300
    rejects = 0
    for trial in range(trials):
        rng = derive_rng(42, trial)
        g = sample(DistributionId.nu(), params, rng)
        rejects += tester.run(QueryOracle(g), rng).rejected

    low, _ = wilson_interval(rejects, trials, 2.576)
    assert low >= 0.66


def test_query_counts_stay_within_budget():
    """Assert every improved run stays below the closed-form budget."""

    rng = derive_rng(43)
    for eps in (Fraction(1, 2), Fraction(1, 8), Fraction(1, 64)):
        tester = ImprovedTester(TesterConfig(eps))
        for n in (128, 1000, 2 ** 20):
            f = LineFunction(range(n))
            report = tester.run(QueryOracle(f), rng)
            assert report.queries <= query_budget(n, eps)
            assert report.queries <= tester.budget(n)

    ergun = ErgunTester(TesterConfig(Fraction(1, 4)))
    f = LineFunction(range(4096))
    assert ergun.run(QueryOracle(f), rng).queries <= ergun.budget(4096)


def test_scan_point_checks_both_sides_per_level():
    """Test a single improved repetition on hand-made functions."""

    f = LineFunction([0, 1, 2, 9, 4, 5, 6, 7])
    oracle = QueryOracle(f)

    assert scan_point(oracle, 8, 3, 2) == (3, 4)
    assert scan_point(QueryOracle(f), 8, 4, 2) == (3, 4)
    # from 5 the queries only reach 4 and 6
    assert scan_point(QueryOracle(f), 8, 5, 2) is None
    assert scan_point(QueryOracle(f), 8, 0, 0) is None


def test_ergun_search_finds_inconsistency():
    """Assert the binary search reports a violating pair with x."""

    f = LineFunction([5, 6, 7, 0, 1, 2])
    witness = ErgunTester.search(QueryOracle(f), 0)

    assert witness is not None
    assert 0 in witness
    x, y = witness
    assert f[x] > f[y] and x < y
    assert ErgunTester.search(QueryOracle(LineFunction(range(6))), 3) is None


def test_exhaustive_tester_is_exact():
    """Assert the exhaustive tester rejects exactly the non-monotone."""

    rng = derive_rng(44)
    for _ in range(30):
        f = LineFunction(rng.integers(0, 3, size=6).tolist(), range_bound=3)
        report = testers.test_exhaustive(QueryOracle(f), 6)
        assert report.rejected == (distance_to_monotone_line(f) > 0)
        assert report.queries == 6


def test_entry_points_check_domain_size():
    """Assert the test_* entry points validate n against the oracle."""

    oracle = QueryOracle(LineFunction(range(8)))
    config = TesterConfig(Fraction(1, 2))

    assert not testers.test_improved(oracle, 8, config).rejected
    fresh = QueryOracle(oracle.function)
    assert not testers.test_ergun(fresh, 8, config).rejected
    with pytest.raises(DomainError):
        testers.test_improved(oracle, 9, config)


def test_budget_capped_tester_accepts_when_out_of_queries():
    """Assert a capped tester stops at its limit and accepts."""

    g = LineFunction([1, 0] * 64)
    capped = make_tester("improved", Fraction(1, 2), limit=2)
    report = capped(g, derive_rng(45))

    assert isinstance(capped, BudgetCappedTester)
    assert report.queries <= 2
    uncapped = make_tester("improved", Fraction(1, 2))
    assert uncapped(g, derive_rng(45)).rejected
    with pytest.raises(ValueError):
        make_tester("quantum", Fraction(1, 2))


def test_split_level_definition():
    """Assert exactly one multiple of 2 ** i lies strictly between."""

    for x in range(40):
        for y in range(x + 2, 60):
            level = split_level(x, y)
            step = 2 ** level
            between = [z for z in range(x + 1, y) if z % step == 0]
            assert len(between) == 1
            if level:
                half = step // 2
                assert len([z for z in range(x + 1, y) if z % half == 0]) > 1
    with pytest.raises(DomainError):
        split_level(3, 4)


def test_certificate_pairs_are_detected():
    """Assert farness certificates exist and one endpoint always rejects."""

    rng = derive_rng(46)
    eps = Fraction(1, 4)
    checked = 0
    while checked < 500:
        f = LineFunction(rng.integers(0, 50, size=64).tolist())
        if distance_to_monotone_line(f) < eps * len(f):
            continue
        checked += 1
        pairs = find_disjoint_violating_pairs(f, eps)
        assert len(pairs) == (eps * len(f)) // 2
        for pair in pairs:
            assert pair.y - pair.x <= eps * len(f)
            assert detecting_endpoints(f, pair, eps)

    with pytest.raises(CertificateError):
        find_disjoint_violating_pairs(LineFunction(range(64)), eps)


def test_ergun_budget_bounds_every_run():
    """Assert binary-search runs never exceed their closed-form budget."""

    rng = derive_rng(47)
    tester = ErgunTester(TesterConfig(Fraction(1, 8)))
    for n in (2, 100, 1024):
        f = LineFunction(range(n))
        assert tester.run(QueryOracle(f), rng).queries <= ergun_query_budget(
            n, Fraction(1, 8)
        )
    assert ergun_query_budget(1024, 1) == 66


@pytest.mark.slow
def test_improved_tester_never_rejects_monotone_at_scale():
    """Assert 10 ** 4 improved runs on monotone inputs never reject."""

    rng = derive_rng(140)
    tester = ImprovedTester(TesterConfig(Fraction(1, 2)))
    bases = (5, 27, 125, 1000)
    rejects = 0
    for run in range(5000):
        params = MuParams(10, bases[run % len(bases)])
        f = sample(DistributionId.mu(), params, rng)
        rejects += tester.run(QueryOracle(f), rng).rejected
    for _ in range(5000):
        values = sorted(rng.integers(0, 2 ** 32, size=1024).tolist())
        rejects += tester(LineFunction(values), rng).rejected

    assert rejects == 0


@pytest.mark.slow
def test_improved_tester_rejects_nu_at_full_scale():
    """Assert nu rejection at k = 10, m = 5 has a 99% lower bound >= 0.95."""

    params = MuParams(10, 5)
    tester = ImprovedTester(TesterConfig(Fraction(1, 2), c=6))
    trials = 1000
    rejects = 0
    for trial in range(trials):
        rng = derive_rng(142, trial)
        g = sample(DistributionId.nu(), params, rng)
        rejects += tester.run(QueryOracle(g), rng).rejected

    low, _ = wilson_interval(rejects, trials, 2.576)
    assert low >= 0.95
