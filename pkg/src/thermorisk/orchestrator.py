"""Deterministic baseline and Monte Carlo campaigns over every design option.

One Latin Hypercube matrix is drawn per campaign and shared by all options,
so row ``j`` of every option sees the same uncertain inputs. Results land in
a preallocated, row-indexed buffer, which makes the output independent of the
number of workers and of task completion order.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .engine import InvalidDraw, build_thermal_model, evaluate
from .model import ClimateTable, ProjectConfig
from .sampling import SampleMatrix, deterministic_point, lhs, redraw_in_stratum

__all__ = [
    "CampaignAbort",
    "CampaignConfig",
    "OutputDistribution",
    "run_deterministic",
    "draw_samples",
    "run_monte_carlo",
    "write_results_csv",
]

log = logging.getLogger(__name__)

MAX_REJECTED_FRACTION = 0.01
MAX_REDRAW_ATTEMPTS = 64


class CampaignAbort(RuntimeError):
    """Too many sample rows broke physical invariants."""


@dataclass(frozen=True)
class CampaignConfig:
    n_samples: int = 500
    seed: int = 0
    jobs: Optional[int] = 1  # None or 0: one worker per CPU

    def __post_init__(self):
        if self.n_samples < 2:
            raise ValueError(f"n_samples must be >= 2, got {self.n_samples}")

    @property
    def workers(self) -> int:
        return self.jobs if self.jobs else (os.cpu_count() or 1)


@dataclass(frozen=True)
class OutputDistribution:
    option_id: int
    samples: np.ndarray
    deterministic_kpi: float

    @property
    def n(self) -> int:
        return len(self.samples)


def run_deterministic(project: ProjectConfig, climate: ClimateTable) -> dict[int, float]:
    """y_det for each option: the engine evaluated once with every input at its mean."""
    x = deterministic_point(project.uncertain) if project.uncertain else np.empty(0)
    return {o.id: evaluate(o, project, climate, x) for o in project.options}


def _row_problems(project: ProjectConfig, row: np.ndarray) -> Optional[InvalidDraw]:
    for o in project.options:
        try:
            build_thermal_model(o, project, row)
        except InvalidDraw as exc:
            return exc
    return None


def draw_samples(project: ProjectConfig, campaign: CampaignConfig) -> SampleMatrix:
    """The campaign's shared sample matrix, with invalid draws redrawn in-stratum.

    A row that makes any option non-physical has the offending column redrawn
    from a retry substream inside the same stratum, so stratification holds.
    More than 1% of rows needing a redraw aborts the campaign.
    """
    inputs = project.uncertain
    matrix = lhs(inputs, campaign.n_samples, campaign.seed)
    n = matrix.n_samples
    probs = matrix.probabilities.copy()
    values = matrix.values.copy()
    redrawn: list[tuple[int, int]] = []
    limit = math.floor(MAX_REJECTED_FRACTION * n)

    bad = {}
    for j in range(n):
        exc = _row_problems(project, values[j])
        if exc is not None:
            bad[j] = exc
    if len(bad) > limit:
        raise CampaignAbort(
            f"{len(bad)} of {n} rows produced invalid draws, more than "
            f"{MAX_REJECTED_FRACTION:.0%} (first: {next(iter(bad.values()))}); "
            "check the distribution settings")

    for j, exc in bad.items():
        attempt = 0
        while exc is not None:
            col = inputs.index(exc.input)
            if attempt >= MAX_REDRAW_ATTEMPTS:
                raise CampaignAbort(f"row {j}: could not redraw {exc.input.label} in its stratum")
            p, v = redraw_in_stratum(exc.input, campaign.seed, col, j,
                                     int(matrix.strata[j, col]), n, attempt)
            probs[j, col] = p
            values[j, col] = v
            redrawn.append((j, col))
            attempt += 1
            exc = _row_problems(project, values[j])

    if not redrawn:
        return matrix
    log.info("redrew %d value(s) in %d row(s)", len(redrawn), len(bad))
    for a in (probs, values):
        a.flags.writeable = False
    return SampleMatrix(matrix.names, probs, values, matrix.strata, matrix.seed, tuple(redrawn))


def run_monte_carlo(
    project: ProjectConfig,
    climate: ClimateTable,
    campaign: CampaignConfig,
    matrix: Optional[SampleMatrix] = None,
    progress: Optional[Callable[[int, int], None]] = None,
    batch_size: int = 50,
) -> dict[int, OutputDistribution]:
    """N engine runs per option, aligned with the rows of the shared sample matrix.

    ``progress(done, total)`` is called after each finished batch of rows; it
    observes the campaign and cannot influence results.
    """
    if matrix is None:
        matrix = draw_samples(project, campaign)
    n = matrix.n_samples
    options = project.options
    y_det = run_deterministic(project, climate)
    out = np.full((len(options), n), np.nan)

    batches = [(k, j, min(j + batch_size, n)) for k in range(len(options))
               for j in range(0, n, batch_size)]
    total = len(options) * n

    def work(task):
        k, lo, hi = task
        opt = options[k]
        for j in range(lo, hi):
            out[k, j] = evaluate(opt, project, climate, matrix.values[j])
        return hi - lo

    done = 0
    if campaign.workers == 1:
        results = map(work, batches)
    else:
        pool = ThreadPoolExecutor(max_workers=campaign.workers)
        results = pool.map(work, batches)
    try:
        for finished in results:
            done += finished
            if progress is not None:
                progress(done, total)
    finally:
        if campaign.workers != 1:
            pool.shutdown()

    if not np.all(np.isfinite(out)) or np.any(out < 0):
        raise CampaignAbort("engine produced non-finite or negative loads")
    dists = {}
    for k, o in enumerate(options):
        samples = out[k].copy()
        samples.flags.writeable = False
        dists[o.id] = OutputDistribution(o.id, samples, y_det[o.id])
    return dists


def write_results_csv(dists: dict[int, OutputDistribution], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("option_id,sample_index,annual_load_kWh_m2\n")
        for oid in sorted(dists):
            for j, y in enumerate(dists[oid].samples):
                fh.write(f"{oid},{j},{y:.9g}\n")
