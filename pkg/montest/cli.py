#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Command-line front end: ``montest <command> [options]``."""
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence
import argparse
import logging
import sys

from montest import settings
from montest.distance import (
    distance_to_monotone_line,
    distance_to_monotone_poset,
    greedy_disjoint_pairs,
    max_disjoint_violating_pairs,
    violation_rows,
)
from montest.errors import CertificateError, ConfigurationError, DomainError
from montest.functions import (
    LineFunction,
    format_function,
    read_function,
    write_function,
)
from montest.helpers import derive_rng, parse_fraction, run_ordered
from montest.instances.distributions import (
    DistributionId,
    Params,
    parse_distribution,
    sample,
)
from montest.instances.grid import hypergrid_order
from montest.instances.params import MuParams, ScaledParams
from montest.reports import ExperimentSpec, ReportDocument, TrialFrame
from montest.testers import (
    TESTERS,
    BaseTester,
    QueryOracle,
    detecting_endpoints,
    find_disjoint_violating_pairs,
    make_tester,
)
from montest import verification


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_USAGE = 2

LEMMAS = (
    "cut",
    "goodalpha",
    "claim-good",
    "claim-good-scaled",
    "claim-bad",
    "nonmonotone",
)


class _ArgumentParser(argparse.ArgumentParser):
    """An argument parser that raises instead of exiting on bad usage."""

    def error(self, message):
        raise ConfigurationError(message)


def _int_list(text: str) -> List[int]:
    try:
        return [int(token) for token in text.split(",") if token.strip()]
    except ValueError as exception:
        raise argparse.ArgumentTypeError(
            f"Expected comma-separated integers, got {text!r}"
        ) from exception


def _pair(text: str) -> List[DistributionId]:
    names = text.split(",")
    if len(names) != 2:
        raise argparse.ArgumentTypeError(
            f"Expected two comma-separated distributions, got {text!r}"
        )
    return [parse_distribution(name.strip()) for name in names]


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed",
        type=int,
        default=settings.DEFAULT_SEED,
        help="base seed; every trial derives its own stream from it",
    )
    common.add_argument("--out", help="write the output file here")
    common.add_argument(
        "--json",
        action="store_true",
        help="print the JSON report to stdout instead of a summary",
    )
    common.add_argument(
        "--verbose", action="store_true", help="log debug output to stderr"
    )
    common.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="worker processes for trials; results do not depend on it",
    )
    return common


def _add_instance_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=int, default=3, help="bit width")
    parser.add_argument(
        "--m",
        type=int,
        default=None,
        help="digit base (default: max(k**3, 3))",
    )
    parser.add_argument(
        "--ell", type=int, default=2, help="blocks of the tilde distributions"
    )


def _add_tester_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--algo", choices=sorted(TESTERS), default="improved"
    )
    parser.add_argument(
        "--eps",
        type=parse_fraction,
        default=Fraction(1, 2),
        help="distance parameter as an exact rational, e.g. 1/8",
    )
    parser.add_argument(
        "--c",
        type=int,
        default=settings.ITERATION_CONSTANT,
        help="repetitions are ceil(c / eps)",
    )
    parser.add_argument("--trials", type=int, default=100)


def build_parser() -> argparse.ArgumentParser:
    """The argument parser of every command."""

    common = _common_parser()
    parser = _ArgumentParser(
        prog=settings.TOOL_NAME,
        description="Monotonicity testers, distance oracles and the hard "
        "distributions behind their query lower bound.",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {settings.TOOL_VERSION}",
    )
    commands = parser.add_subparsers(
        dest="command", metavar="command", parser_class=_ArgumentParser
    )
    commands.required = True

    gen = commands.add_parser(
        "gen", parents=[common], help="sample a function file"
    )
    gen.add_argument("--dist", type=parse_distribution, required=True)
    _add_instance_arguments(gen)
    gen.add_argument(
        "--with-distance",
        action="store_true",
        help="also compute the exact distance to monotone",
    )
    gen.set_defaults(handler=cmd_gen)

    dist = commands.add_parser(
        "dist", parents=[common], help="exact distance of a function file"
    )
    dist.add_argument("input")
    dist.set_defaults(handler=cmd_dist)

    test = commands.add_parser(
        "test", parents=[common], help="run a tester repeatedly"
    )
    source = test.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="function file to test")
    source.add_argument(
        "--dist",
        type=parse_distribution,
        help="draw a fresh function from this distribution per trial",
    )
    _add_instance_arguments(test)
    _add_tester_arguments(test)
    test.add_argument(
        "--limit", type=int, default=None, help="cap on queries per run"
    )
    test.set_defaults(handler=cmd_test)

    pairs = commands.add_parser(
        "pairs",
        parents=[common],
        help="disjoint violating pairs certifying farness",
    )
    pairs.add_argument("input")
    pairs.add_argument(
        "--eps",
        type=parse_fraction,
        default=None,
        help="require floor(eps * n / 2) pairs and check detection",
    )
    pairs.set_defaults(handler=cmd_pairs)

    verify = commands.add_parser(
        "verify", parents=[common], help="check a lemma on finite cases"
    )
    verify.add_argument("--lemma", choices=LEMMAS, required=True)
    _add_instance_arguments(verify)
    verify.set_defaults(m=5)
    verify.add_argument("--exhaustive", action="store_true")
    verify.add_argument("--trials", type=int, default=200)
    verify.add_argument(
        "--weight",
        type=int,
        default=None,
        help="assignment weight (cut) or maximum weight (sweeps)",
    )
    verify.add_argument(
        "--q", type=int, default=None, help="queries for claim-bad"
    )
    verify.set_defaults(handler=cmd_verify)

    grid = commands.add_parser(
        "grid",
        parents=[common],
        help="regroup a function onto a hypergrid",
    )
    grid_source = grid.add_mutually_exclusive_group(required=True)
    grid_source.add_argument("--input")
    grid_source.add_argument("--dist", type=parse_distribution)
    _add_instance_arguments(grid)
    grid.add_argument("--d", type=int, required=True, help="dimension")
    grid.add_argument("--b", type=int, required=True, help="bits per axis")
    grid.set_defaults(handler=cmd_grid)

    experiment = commands.add_parser(
        "experiment",
        parents=[common],
        help="acceptance gap between two distributions per query budget",
    )
    _add_instance_arguments(experiment)
    _add_tester_arguments(experiment)
    experiment.add_argument(
        "--pair",
        type=_pair,
        default=None,
        help="two distributions, e.g. mu,nu (default: mu,nu or tilde)",
    )
    experiment.add_argument(
        "--budgets",
        type=_int_list,
        default=None,
        help="comma-separated query budgets; uncapped when omitted",
    )
    experiment.set_defaults(handler=cmd_experiment)
    return parser


def make_params(args: argparse.Namespace, dist: DistributionId) -> Params:
    """``MuParams`` or ``ScaledParams`` for ``dist`` from the flags."""

    m = MuParams.cubic(args.k).m if args.m is None else args.m
    if dist.is_scaled:
        return ScaledParams(args.ell, args.k, m)
    return MuParams(args.k, m)


def _instance_options(args: argparse.Namespace) -> Dict[str, Any]:
    return {"k": args.k, "m": args.m, "ell": args.ell}


def _finish(
    args: argparse.Namespace,
    document: ReportDocument,
    summary: Sequence[str],
) -> None:
    if args.out:
        document.write(args.out)
    if args.json:
        sys.stdout.write(document.to_json())
    else:
        print("\n".join(summary))


def _pairs_payload(pairs) -> List[List[int]]:
    return [[pair.x, pair.y] for pair in pairs]


def cmd_gen(args: argparse.Namespace) -> int:
    """Sample one function and write it in the function file format."""

    params = make_params(args, args.dist)
    f = sample(args.dist, params, derive_rng(args.seed))
    summary: Dict[str, Any] = {"n": f.n, "r": f.range_bound}
    if args.with_distance:
        summary["distance"] = distance_to_monotone_line(f)
    logger.info("Sampled %s with n=%s", args.dist, f.n)

    if args.out:
        write_function(f, args.out)
        stream = sys.stdout
    else:
        sys.stdout.write(format_function(f))
        stream = sys.stderr
    for key, value in summary.items():
        print(f"{key}: {value}", file=stream)
    return EXIT_OK


def cmd_dist(args: argparse.Namespace) -> int:
    """Exact distance to monotone of a function file."""

    f = read_function(args.input)
    distance = distance_to_monotone_line(f)
    ratio = Fraction(distance, f.n)
    pairs = greedy_disjoint_pairs(f) if distance else []

    result = {
        "n": f.n,
        "distance": distance,
        "ratio": str(ratio),
        "pairs": _pairs_payload(pairs),
    }
    document = ReportDocument(
        ExperimentSpec("dist", args.input, seed=args.seed, output=args.out),
        extra={"result": result},
    )
    summary = [
        f"n: {f.n}",
        f"distance: {distance}",
        f"ratio: {ratio} ({float(ratio):.4f})",
    ]
    if pairs:
        summary.append(f"disjoint pairs: {len(pairs)}")
    _finish(args, document, summary)
    return EXIT_OK


def _test_trial(payload) -> Dict[str, Any]:
    tester, source, params, seed, trial = payload
    rng = derive_rng(seed, trial)
    f = source if isinstance(source, LineFunction) else None
    if f is None:
        f = sample(source, params, rng)
    report = tester.run(QueryOracle(f), rng)
    bound = tester.budget(f.n)
    return {
        "trial": trial,
        "verdict": report.verdict.value,
        "queries": report.queries,
        "witness": list(report.witness) if report.witness else None,
        "within_budget": bound is None or report.queries <= bound,
    }


def _check_tester(tester: BaseTester, n: int) -> None:
    # raises ConfigurationError before any trial runs
    getattr(tester, "tester", tester).budget(n)


def cmd_test(args: argparse.Namespace) -> int:
    """Run a tester for ``--trials`` trials; exit 1 on reject-majority."""

    if args.trials < 1:
        raise ConfigurationError(f"Need at least one trial: {args.trials}")
    tester = make_tester(args.algo, args.eps, args.c, args.seed, args.limit)
    if args.input is not None:
        source: Any = read_function(args.input)
        params = None
        n = source.n
        name = args.input
    else:
        source = args.dist
        params = make_params(args, args.dist)
        n = params.domain_size
        name = str(args.dist)
    _check_tester(tester, n)

    payloads = [
        (tester, source, params, args.seed, trial)
        for trial in range(args.trials)
    ]
    records = run_ordered(_test_trial, payloads, args.jobs)
    options = dict(c=args.c, limit=args.limit)
    if params is not None:
        options.update(_instance_options(args))
    spec = ExperimentSpec(
        "test",
        name,
        tester=args.algo,
        eps=str(args.eps),
        trials=args.trials,
        seed=args.seed,
        output=args.out,
        options=options,
    )
    document = ReportDocument.from_tester_trials(spec, records)
    aggregates = document.aggregates
    counts = aggregates["verdict_counts"]
    if not all(record["within_budget"] for record in records):
        logger.warning("%s exceeded its query budget", tester.name)

    _finish(
        args,
        document,
        [
            f"accept: {counts['accept']}",
            f"reject: {counts['reject']}",
            f"mean_queries: {aggregates['mean_queries']:.2f}",
            f"max_queries: {aggregates['max_queries']}",
        ],
    )
    return EXIT_REJECT if counts["reject"] > counts["accept"] else EXIT_OK


def cmd_pairs(args: argparse.Namespace) -> int:
    """Disjoint violating pairs of a function file."""

    f = read_function(args.input)
    result: Dict[str, Any] = {"n": f.n}
    if args.eps is None:
        pairs = greedy_disjoint_pairs(f)
    else:
        pairs = find_disjoint_violating_pairs(f, args.eps)
        result["detecting"] = [
            detecting_endpoints(f, pair, args.eps) for pair in pairs
        ]
    result["pairs"] = _pairs_payload(pairs)

    document = ReportDocument(
        ExperimentSpec(
            "pairs",
            args.input,
            eps=None if args.eps is None else str(args.eps),
            seed=args.seed,
            output=args.out,
        ),
        extra={"result": result},
    )
    summary = [f"n: {f.n}", f"pairs: {len(pairs)}"]
    summary += [f"{pair.x} {pair.y}" for pair in pairs]
    _finish(args, document, summary)
    return EXIT_OK


def _verify_cut(args, rng) -> List[verification.LemmaCheckResult]:
    n = 1 << args.k
    weights = (
        [args.weight]
        if args.weight is not None
        else range(1, min(args.k + 1, n, 8) + 1)
    )
    exhaustive = True if args.exhaustive else None
    results = [
        verification.check_cut_lemma(
            args.k, weight, args.trials, rng, exhaustive
        )
        for weight in weights
    ]
    results.append(verification.check_cut_tightness(args.k))
    return results


def _verify_goodalpha(args, rng):
    params = MuParams(args.k, args.m)
    max_weight = min(3, params.domain_size)
    max_weight = max_weight if args.weight is None else args.weight
    return [
        verification.sweep_goodalpha(
            params, max_weight, args.trials, rng, args.exhaustive
        )
    ]


def _verify_claim_good(args, rng):
    return [
        verification.sweep_claim_good(
            MuParams(args.k, args.m),
            args.trials,
            rng,
            args.exhaustive,
            max_weight=args.weight,
        )
    ]


def _verify_claim_good_scaled(args, rng):
    scaled = ScaledParams(args.ell, args.k, args.m)
    return [verification.sweep_claim_good_scaled(scaled, args.trials, rng)]


def _verify_claim_bad(args, rng):
    return [
        verification.check_claim_bad(
            MuParams(args.k, args.m), args.trials, rng, args.q
        )
    ]


def _verify_nonmonotone(args, rng):
    return [
        verification.check_nonmonotone(
            MuParams(args.k, args.m), args.trials, rng, args.exhaustive
        )
    ]


_VERIFIERS: Dict[str, Callable] = {
    "cut": _verify_cut,
    "goodalpha": _verify_goodalpha,
    "claim-good": _verify_claim_good,
    "claim-good-scaled": _verify_claim_good_scaled,
    "claim-bad": _verify_claim_bad,
    "nonmonotone": _verify_nonmonotone,
}


def cmd_verify(args: argparse.Namespace) -> int:
    """Check one lemma; exit 1 on any counterexample."""

    rng = derive_rng(args.seed)
    results = _VERIFIERS[args.lemma](args, rng)
    spec = ExperimentSpec(
        "verify",
        args.lemma,
        trials=args.trials,
        seed=args.seed,
        output=args.out,
        options=dict(
            _instance_options(args),
            exhaustive=args.exhaustive,
            weight=args.weight,
            q=args.q,
        ),
    )
    document = ReportDocument(
        spec, extra={"results": [result.as_dict() for result in results]}
    )
    summary = [
        f"{result.lemma} {result.params}: {result.outcome.value} "
        f"(cases={result.cases}, skipped={result.skipped})"
        for result in results
    ]
    _finish(args, document, summary)
    failed = any(result.failed for result in results)
    return EXIT_REJECT if failed else EXIT_OK


def cmd_grid(args: argparse.Namespace) -> int:
    """Violations and distance of a function regrouped onto a hypergrid."""

    order = hypergrid_order(args.d, args.b)
    if args.input is not None:
        f = read_function(args.input)
        name = args.input
    else:
        params = make_params(args, args.dist)
        f = sample(args.dist, params, derive_rng(args.seed))
        name = str(args.dist)
    if f.n != order.size:
        raise DomainError(
            f"A {order} needs {order.size} points, the function has {f.n}"
        )

    violations = sum(len(ys) for _, ys in violation_rows(f, order))
    disjoint = max_disjoint_violating_pairs(f, order)
    exact: Optional[int] = None
    if order.size <= settings.MATCHING_ORACLE_CAP:
        exact = distance_to_monotone_poset(f, order, method="matching")
    else:
        logger.warning(
            "Skipping the exact distance: %s points exceed the cap of %s",
            order.size,
            settings.MATCHING_ORACLE_CAP,
        )

    result = {
        "n": f.n,
        "violating_pairs": violations,
        "disjoint_pairs": len(disjoint),
        "distance": exact,
        "line_distance": distance_to_monotone_line(f),
    }
    spec = ExperimentSpec(
        "grid",
        name,
        seed=args.seed,
        output=args.out,
        options=dict(_instance_options(args), d=args.d, b=args.b),
    )
    document = ReportDocument(spec, extra={"result": result})
    summary = [f"{key}: {value}" for key, value in result.items()]
    _finish(args, document, summary)
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    """Acceptance on both sides of a hard pair, per query budget."""

    pair = args.pair
    first = pair[0] if pair else DistributionId.mu()
    params = make_params(args, first)
    pair = tuple(pair) if pair else verification.default_pair(params)
    tester = make_tester(args.algo, args.eps, args.c, args.seed)
    _check_tester(tester, params.domain_size)

    records: List[Dict[str, Any]] = []
    for budget in args.budgets or [None]:
        gap = verification.distinguishing_experiment(
            tester,
            params,
            args.trials,
            args.seed,
            pair,
            budget=budget,
            jobs=args.jobs,
        )
        records.extend(gap.records)

    spec = ExperimentSpec(
        "experiment",
        ",".join(str(dist) for dist in pair),
        tester=args.algo,
        eps=str(args.eps),
        trials=args.trials,
        seed=args.seed,
        output=args.out,
        options=dict(
            _instance_options(args), c=args.c, budgets=args.budgets
        ),
    )
    document = ReportDocument.from_gap_trials(spec, records)
    summary = ["budget accept_mu accept_nu gap mean_queries"]
    for row in TrialFrame(records).gap_aggregates():
        summary.append(
            f"{row['budget']} {row['accept_mu']:.3f} "
            f"{row['accept_nu']:.3f} {row['gap']:.3f} "
            f"{row['mean_queries']:.2f}"
        )
    _finish(args, document, summary)
    return EXIT_OK


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format=settings.LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command and return its exit code.

    0 means accept or verified, 1 reject or counterexample, 2 bad usage
    or an unreadable input.
    """

    try:
        args = build_parser().parse_args(argv)
        _configure_logging(args.verbose)
        return args.handler(args)
    except CertificateError as exception:
        print(f"{settings.TOOL_NAME}: {exception}", file=sys.stderr)
        return EXIT_REJECT
    except (ValueError, OSError) as exception:
        print(f"{settings.TOOL_NAME}: error: {exception}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
