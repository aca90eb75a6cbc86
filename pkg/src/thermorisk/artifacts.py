"""On-disk run artifacts: summary.json, ranking.json and results.csv readers.

Every float is stored at 9 significant digits. The SVG renderer reads these
files back, so the numbers it annotates are the numbers written here.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Mapping, Optional

import numpy as np

from .decision import CriterionRanking, RankingComparison, RiskReport
from .orchestrator import OutputDistribution
from .stats import ALPHA, histogram, quartile_index, shapiro_wilk, summarize

__all__ = [
    "HISTOGRAM_BINS",
    "ArtifactError",
    "round9",
    "summary_document",
    "ranking_document",
    "deterministic_document",
    "write_json",
    "read_json",
    "read_results_csv",
]

HISTOGRAM_BINS = 20


class ArtifactError(RuntimeError):
    """A run directory is missing files or holds unreadable ones."""


def round9(x: float) -> float:
    return float(f"{float(x):.9g}")


def summary_document(dists: Mapping[int, OutputDistribution], names: Mapping[int, str],
                     n_samples: int, seed: int) -> dict[str, Any]:
    options = []
    for oid in sorted(dists):
        d = dists[oid]
        s = summarize(d.samples)
        sw = shapiro_wilk(d.samples)
        h = histogram(d.samples, HISTOGRAM_BINS)
        options.append({
            "option_id": oid,
            "name": names.get(oid, ""),
            "deterministic_kpi": round9(d.deterministic_kpi),
            "deterministic_quartile": quartile_index(s, d.deterministic_kpi),
            "summary": {
                "n": s.n,
                "mean": round9(s.mean),
                "std": round9(s.std),
                "variance": round9(s.variance),
                "min": round9(s.min),
                "max": round9(s.max),
                "q25": round9(s.q25),
                "q50": round9(s.q50),
                "q75": round9(s.q75),
                "median_ci_low": round9(s.median_ci_low),
                "median_ci_high": round9(s.median_ci_high),
                "median_ci_level": 0.95,
            },
            "normality": {
                "test": "shapiro_wilk",
                "w": round9(sw.w),
                "p_value": round9(sw.p_value),
                "n": sw.n,
                "alpha": ALPHA,
                "reject_normality": sw.rejects(),
            },
            "histogram": {
                "edges": [round9(e) for e in h.edges],
                "counts": [int(c) for c in h.counts],
            },
        })
    return {"mode": "monte_carlo", "n_samples": n_samples, "seed": seed, "options": options}


def deterministic_document(y_det: Mapping[int, float], names: Mapping[int, str]) -> dict[str, Any]:
    return {
        "mode": "deterministic",
        "options": [{"option_id": oid, "name": names.get(oid, ""),
                     "deterministic_kpi": round9(y_det[oid])} for oid in sorted(y_det)],
    }


def ranking_document(report: RiskReport, rankings: Mapping[str, CriterionRanking],
                     comparison: Optional[RankingComparison]) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "risk_report": [
            {
                "option_id": r.option_id,
                "deterministic_kpi": round9(r.deterministic_kpi),
                "kri_mean": round9(r.mean),
                "kri_std": round9(r.std),
                "kri_variance": round9(r.variance),
                "min": round9(r.min),
                "max": round9(r.max),
            }
            for _, r in sorted(report.options.items())
        ],
        "rankings": {
            c: {"order": list(r.order), "scores": {str(k): round9(v) for k, v in r.scores.items()}}
            for c, r in rankings.items()
        },
    }
    if comparison is not None:
        doc["comparison"] = [
            {"a": a, "b": b, "kendall_tau_distance": d, "differs": f}
            for a, b, d, f in comparison.pairs
        ]
    return doc


def write_json(doc: Mapping[str, Any], path: Path) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def read_json(path: Path) -> dict[str, Any]:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ArtifactError(f"missing artifact: {path}") from None
    except (OSError, json.JSONDecodeError) as exc:
        raise ArtifactError(f"unreadable artifact {path}: {exc}") from None


def read_results_csv(path: Path) -> dict[int, np.ndarray]:
    """Samples per option from results.csv, ordered by sample index."""
    rows: dict[int, list[tuple[int, float]]] = {}
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["option_id", "sample_index", "annual_load_kWh_m2"]:
                raise ArtifactError(f"{path}: unexpected header {header}")
            for row in reader:
                oid, j, y = int(row[0]), int(row[1]), float(row[2])
                rows.setdefault(oid, []).append((j, y))
    except FileNotFoundError:
        raise ArtifactError(f"missing artifact: {path}") from None
    except (ValueError, IndexError) as exc:
        raise ArtifactError(f"corrupt artifact {path}: {exc}") from None
    out = {}
    for oid, pairs in rows.items():
        pairs.sort()
        if [j for j, _ in pairs] != list(range(len(pairs))):
            raise ArtifactError(f"{path}: option {oid} has gaps in sample_index")
        out[oid] = np.array([y for _, y in pairs])
    return out
