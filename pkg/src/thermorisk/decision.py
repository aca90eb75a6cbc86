"""KPI/KRI extraction and design-option rankings under four decision criteria.

The KPI is a cost (annual load, lower is better). Treating payoff as the
negative load, maximax picks the best best case (smallest minimum) and maximin
the best worst case (smallest maximum).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .orchestrator import OutputDistribution
from .stats import quantile, summarize

__all__ = [
    "CRITERIA",
    "OptionRisk",
    "RiskReport",
    "CriterionRanking",
    "RankingComparison",
    "risk_report",
    "criterion_scores",
    "rank",
    "rank_all",
    "kendall_tau_distance",
    "ranking_comparison",
]

CRITERIA = ("deterministic", "expected_value", "maximax", "maximin")


@dataclass(frozen=True)
class OptionRisk:
    option_id: int
    deterministic_kpi: float
    mean: float
    std: float
    variance: float
    min: float
    max: float


@dataclass(frozen=True)
class RiskReport:
    options: Mapping[int, OptionRisk]

    def __getitem__(self, option_id: int) -> OptionRisk:
        return self.options[option_id]


@dataclass(frozen=True)
class CriterionRanking:
    criterion: str
    order: tuple[int, ...]
    scores: Mapping[int, float]


@dataclass(frozen=True)
class RankingComparison:
    """Pairwise Kendall tau distances; ``differs`` is true when two orders disagree."""

    pairs: tuple[tuple[str, str, int, bool], ...]

    def distance(self, a: str, b: str) -> int:
        for x, y, d, _ in self.pairs:
            if {x, y} == {a, b}:
                return d
        raise KeyError((a, b))

    def differs(self, a: str, b: str) -> bool:
        return self.distance(a, b) > 0


def risk_report(dists: Mapping[int, OutputDistribution]) -> RiskReport:
    out = {}
    for oid in sorted(dists):
        d = dists[oid]
        s = summarize(d.samples)
        out[oid] = OptionRisk(oid, d.deterministic_kpi, s.mean, s.std, s.variance, s.min, s.max)
    return RiskReport(out)


Source = Union[RiskReport, Mapping[int, OutputDistribution]]


def criterion_scores(criterion: str, source: Source,
                     percentile: Optional[float] = None) -> dict[int, float]:
    """Score each option for ``criterion``; lower scores rank first.

    With ``percentile`` (e.g. 1.0), maximax uses that lower percentile and
    maximin the mirrored upper one instead of the sample extremes; this needs
    the raw distributions.
    """
    if criterion not in CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}; expected one of {CRITERIA}")
    if isinstance(source, RiskReport):
        if percentile is not None:
            raise ValueError("percentile scores need the sample distributions")
        field = {"deterministic": "deterministic_kpi", "expected_value": "mean",
                 "maximax": "min", "maximin": "max"}[criterion]
        return {oid: getattr(r, field) for oid, r in source.options.items()}

    if percentile is not None and criterion in ("maximax", "maximin"):
        if not 0 <= percentile <= 50:
            raise ValueError("percentile must lie in [0, 50]")
        p = percentile / 100.0 if criterion == "maximax" else 1.0 - percentile / 100.0
        return {oid: quantile(np.sort(d.samples), p) for oid, d in source.items()}
    return criterion_scores(criterion, risk_report(source))


def rank(criterion: str, scores: Union[Source, Mapping[int, float]],
         percentile: Optional[float] = None) -> CriterionRanking:
    """Options in ascending score order, ties broken by ascending id."""
    if isinstance(scores, RiskReport) or any(
            isinstance(v, OutputDistribution) for v in scores.values()):
        scores = criterion_scores(criterion, scores, percentile)
    elif criterion not in CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}; expected one of {CRITERIA}")
    if not scores:
        raise ValueError("cannot rank an empty option set")
    order = tuple(sorted(scores, key=lambda oid: (scores[oid], oid)))
    return CriterionRanking(criterion, order, {oid: float(scores[oid]) for oid in order})


def rank_all(report: RiskReport) -> dict[str, CriterionRanking]:
    return {c: rank(c, report) for c in CRITERIA}


def kendall_tau_distance(a: Sequence[int], b: Sequence[int]) -> int:
    """Number of option pairs that the two orderings put in opposite order."""
    if sorted(a) != sorted(b):
        raise ValueError("orderings cover different option sets")
    pos = {oid: i for i, oid in enumerate(b)}
    return sum(1 for x, y in combinations(a, 2) if pos[x] > pos[y])


def ranking_comparison(rankings: Mapping[str, CriterionRanking]) -> RankingComparison:
    names = [c for c in CRITERIA if c in rankings] + sorted(set(rankings) - set(CRITERIA))
    pairs = []
    for x, y in combinations(names, 2):
        d = kendall_tau_distance(rankings[x].order, rankings[y].order)
        pairs.append((x, y, d, d > 0))
    return RankingComparison(tuple(pairs))
