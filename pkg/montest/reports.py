#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Per-trial records, aggregates and deterministic JSON reports."""
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterable, List, Optional
import json
import logging
import os

import pandas as pd

from montest import settings


logger = logging.getLogger(__name__)

TRIAL_COLUMNS = ("trial", "verdict", "queries")


@dataclass(frozen=True)
class ExperimentSpec:
    """
    Everything needed to re-run a command and get the same report.

    Attributes
    ----------
    command: str
        CLI command name.
    source: str
        Distribution name or input file path.
    tester: str, optional
    eps: str, optional
        Exact rational as written on the command line.
    trials: int
    seed: int
        Base seed; trial ``i`` draws from ``derive_rng(seed, ..., i)``.
    output: str, optional
    options: dict
        Remaining command-specific parameters.

    Examples
    --------
    >>> from montest.reports import ExperimentSpec
    >>> ExperimentSpec("test", "mu", options={"k": 3}).as_dict()["options"]
    {'k': 3}
    """

    command: str
    source: str
    tester: Optional[str] = None
    eps: Optional[str] = None
    trials: int = 0
    seed: int = settings.DEFAULT_SEED
    output: Optional[str] = None
    options: Dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


class TrialFrame:
    """
    Per-trial records backed by a pandas DataFrame.

    Rows stay in trial order, never completion order.

    Parameters
    ----------
    records: iterable of dict
        One mapping per trial. Tester trials carry at least ``trial``,
        ``verdict`` and ``queries``.

    Attributes
    ----------
    frame: pandas DataFrame

    Examples
    --------
    >>> from montest.reports import TrialFrame
    >>> trials = TrialFrame([
    ...     {"trial": 0, "verdict": "accept", "queries": 3},
    ...     {"trial": 1, "verdict": "reject", "queries": 5},
    ... ])
    >>> len(trials), trials.acceptance_rate(), trials.query_stats()
    (2, 0.5, {'mean_queries': 4.0, 'max_queries': 5})
    """

    def __init__(self, records: Iterable[Dict[str, Any]]):
        self.frame = pd.DataFrame.from_records(list(records))

    def __len__(self):
        return len(self.frame)

    def __getitem__(self, idx):
        return self.frame.iloc[idx]

    def records(self) -> List[Dict[str, Any]]:
        """Rows as plain dicts with JSON-friendly values."""

        return json.loads(self.frame.to_json(orient="records"))

    def verdict_counts(self, by: Optional[str] = None) -> Dict[str, Any]:
        """Accept and reject counts, optionally per value of ``by``."""

        if "verdict" not in self.frame.columns:
            return {"accept": 0, "reject": 0}
        if by is None:
            counts = self.frame["verdict"].value_counts()
            return {
                verdict: int(counts.get(verdict, 0))
                for verdict in ("accept", "reject")
            }
        return {
            str(key): TrialFrame(group.to_dict("records")).verdict_counts()
            for key, group in self.frame.groupby(by, sort=True)
        }

    def acceptance_rate(self) -> float:
        if not len(self.frame):
            return 0.0
        return float((self.frame["verdict"] == "accept").mean())

    def query_stats(self) -> Dict[str, Any]:
        """Mean and maximum counted queries per trial."""

        if not len(self.frame):
            return {"mean_queries": 0.0, "max_queries": 0}
        queries = self.frame["queries"]
        return {
            "mean_queries": float(queries.mean()),
            "max_queries": int(queries.max()),
        }

    def tester_aggregates(self) -> Dict[str, Any]:
        """Aggregates of a plain tester run, recomputable from the rows."""

        aggregates = {
            "verdict_counts": self.verdict_counts(),
            "acceptance_rate": self.acceptance_rate(),
        }
        aggregates.update(self.query_stats())
        return aggregates

    def gap_aggregates(self, by: str = "budget") -> List[Dict[str, Any]]:
        """
        Acceptance on each side of a distinguishing experiment.

        Rows need a ``side`` column (``mu`` or ``nu``) and, if several
        query budgets were run, a ``by`` column. A frame without
        rows gives no aggregates.
        """

        if "side" not in self.frame.columns:
            return []
        if by not in self.frame.columns:
            groups = [(None, self.frame)]
        else:
            groups = list(self.frame.groupby(by, sort=True, dropna=False))

        rows = []
        for key, group in groups:
            sides = {
                side: TrialFrame(part.to_dict("records"))
                for side, part in group.groupby("side", sort=True)
            }
            accept_mu = sides["mu"].acceptance_rate() if "mu" in sides else 0
            accept_nu = sides["nu"].acceptance_rate() if "nu" in sides else 0
            row = {
                by: None if key is None or pd.isna(key) else int(key),
                "accept_mu": accept_mu,
                "accept_nu": accept_nu,
                "gap": accept_mu - accept_nu,
            }
            row.update(TrialFrame(group.to_dict("records")).query_stats())
            rows.append(row)
        return rows


@dataclass
class ReportDocument:
    """
    A command's persisted report.

    ``aggregates`` must be recomputable from ``trials``; see
    ``check_aggregates``.
    """

    spec: ExperimentSpec
    trials: List[Dict[str, Any]] = field(default_factory=list)
    aggregates: Dict[str, Any] = field(default_factory=dict)
    extra: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_tester_trials(
        cls,
        spec: ExperimentSpec,
        records: Iterable[Dict[str, Any]],
        extra: Optional[Dict[str, Any]] = None,
    ) -> "ReportDocument":
        frame = TrialFrame(records)
        aggregates = frame.tester_aggregates()
        aggregates["witnesses"] = [
            row["witness"]
            for row in frame.records()
            if row.get("witness") is not None
        ]
        return cls(spec, frame.records(), aggregates, extra or {})

    @classmethod
    def from_gap_trials(
        cls,
        spec: ExperimentSpec,
        records: Iterable[Dict[str, Any]],
        extra: Optional[Dict[str, Any]] = None,
    ) -> "ReportDocument":
        frame = TrialFrame(records)
        return cls(
            spec,
            frame.records(),
            {"rows": frame.gap_aggregates()},
            extra or {},
        )

    def check_aggregates(self) -> bool:
        """Recompute the aggregates from the trials and compare."""

        if "rows" in self.aggregates:
            again = ReportDocument.from_gap_trials(self.spec, self.trials)
        else:
            again = ReportDocument.from_tester_trials(self.spec, self.trials)
        return again.aggregates == self.aggregates

    def as_dict(self) -> Dict[str, Any]:
        document = {
            "schema": settings.REPORT_SCHEMA,
            "tool": {
                "name": settings.TOOL_NAME,
                "version": settings.TOOL_VERSION,
            },
            "spec": self.spec.as_dict(),
            "aggregates": self.aggregates,
            "trials": self.trials,
        }
        document.update(self.extra)
        return document

    def to_json(self) -> str:
        """Deterministic JSON: sorted keys, fixed indent, final newline."""

        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"

    def write(self, file_path: str) -> None:
        file_path = os.path.abspath(file_path)
        logger.info("Writing %s report to %s", self.spec.command, file_path)
        with open(file_path, "w", encoding="utf-8", newline="\n") as f_obj:
            f_obj.write(self.to_json())
