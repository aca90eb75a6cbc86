"""Command-line entry point: ``thermorisk validate | run | report``.

Exit codes: 0 success, 1 validation or domain failure, 2 environment or I/O
failure, 3 campaign abort.
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .artifacts import (
    ArtifactError,
    deterministic_document,
    ranking_document,
    summary_document,
    write_json,
)
from .decision import rank_all, ranking_comparison, risk_report
from .engine import InvalidDraw
from .model import (
    MissingFileError,
    ProjectConfig,
    ProjectError,
    load_climate,
    load_material_db,
    load_project,
    merge_material_properties,
    validate,
)
from .orchestrator import (
    CampaignAbort,
    CampaignConfig,
    draw_samples,
    run_deterministic,
    run_monte_carlo,
    write_results_csv,
)
from .report import render_run
from .sampling import write_samples_csv

log = logging.getLogger("thermorisk")

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_ABORT = 0, 1, 2, 3
CLIMATE_ENV = "THERMORISK_CLIMATE"
BUNDLED_CLIMATE = Path(__file__).parent / "data" / "climate_chicago.csv"


def _prepare(path: Path) -> tuple[ProjectConfig, list]:
    """Load, merge materials and validate. Raises ProjectError/OSError on I/O problems."""
    project = load_project(path, check=False)
    problems = validate(project)
    if problems:
        return project, problems
    if project.materials_file is not None:
        db = load_material_db(project.resolve(project.materials_file))
        project = merge_material_properties(project, db)
    return project, validate(project)


def _climate_path(project: ProjectConfig) -> Path:
    env = os.environ.get(CLIMATE_ENV)
    if env:
        return Path(env)
    if project.climate_file is not None:
        return project.resolve(project.climate_file)
    return BUNDLED_CLIMATE


def cmd_validate(args) -> int:
    path = Path(args.project)
    if not path.is_file():
        print(f"error: cannot read {path}", file=sys.stderr)
        return EXIT_IO
    try:
        _, problems = _prepare(path)
    except ProjectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO if isinstance(exc, MissingFileError) else EXIT_INVALID
    for v in problems:
        print(f"- {v}")
    if problems:
        print(f"{len(problems)} violation(s)")
        return EXIT_INVALID
    print("ok")
    return EXIT_OK


def cmd_run(args) -> int:
    path = Path(args.project)
    started = datetime.now(timezone.utc)
    stages: dict[str, float] = {}
    t0 = time.perf_counter()
    try:
        raw = path.read_bytes()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        project, problems = _prepare(path)
        climate = load_climate(_climate_path(project))
    except ProjectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO if isinstance(exc, MissingFileError) else EXIT_INVALID
    if problems:
        for v in problems:
            print(f"- {v}", file=sys.stderr)
        return EXIT_INVALID
    stages["load"] = time.perf_counter() - t0

    n = args.samples if args.samples is not None else project.n_samples
    seed = args.seed if args.seed is not None else project.seed
    if n < 2:
        print(f"usage error: --samples must be >= 2, got {n}", file=sys.stderr)
        return EXIT_INVALID
    if not 0 <= seed < 2**64:
        print("usage error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_INVALID

    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    names = {o.id: o.name for o in project.options}
    files: list[str] = []

    try:
        if args.deterministic_only or not project.uncertain:
            t = time.perf_counter()
            y_det = run_deterministic(project, climate)
            stages["deterministic"] = time.perf_counter() - t
            write_json(deterministic_document(y_det, names), out / "summary.json")
            files.append("summary.json")
        else:
            campaign = CampaignConfig(n, seed, args.jobs)
            t = time.perf_counter()
            matrix = draw_samples(project, campaign)
            stages["sampling"] = time.perf_counter() - t
            write_samples_csv(matrix, out / "samples.csv")

            t = time.perf_counter()

            def progress(done: int, total: int) -> None:
                log.info("simulated %d/%d", done, total)

            dists = run_monte_carlo(project, climate, campaign, matrix, progress)
            stages["simulation"] = time.perf_counter() - t
            write_results_csv(dists, out / "results.csv")

            t = time.perf_counter()
            write_json(summary_document(dists, names, n, seed), out / "summary.json")
            report = risk_report(dists)
            rankings = rank_all(report)
            write_json(ranking_document(report, rankings, ranking_comparison(rankings)),
                       out / "ranking.json")
            stages["statistics"] = time.perf_counter() - t

            t = time.perf_counter()
            plots, text = render_run(out)
            stages["report"] = time.perf_counter() - t
            files += ["samples.csv", "results.csv", "summary.json", "ranking.json"]
            files += [str(p.relative_to(out)) for p in plots]
            print(text)
    except CampaignAbort as exc:
        print(f"campaign aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except (InvalidDraw, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, ArtifactError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    manifest = {
        "tool": "thermorisk",
        "version": __version__,
        "project": str(path),
        "project_sha256": hashlib.sha256(raw).hexdigest(),
        "seed": seed,
        "n_samples": n,
        "deterministic_only": bool(args.deterministic_only),
        "started": started.isoformat(),
        "finished": datetime.now(timezone.utc).isoformat(),
        "stage_seconds": {k: round(v, 6) for k, v in stages.items()},
        "files": files,
    }
    try:
        write_json(manifest, out / "manifest.json")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        plots, text = render_run(Path(args.run_dir))
    except ArtifactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(text)
    for p in plots:
        print(f"wrote {p}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="thermorisk",
        description="Probabilistic building thermal-load analysis and risk ranking.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a project file and its material database")
    p.add_argument("project")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="deterministic baseline and Monte Carlo campaign")
    p.add_argument("project")
    p.add_argument("--samples", type=int, help="Monte Carlo sample count N (default: project)")
    p.add_argument("--seed", type=int, help="campaign seed (default: project)")
    p.add_argument("--jobs", type=int, default=1, help="worker threads; 0 = one per CPU")
    p.add_argument("--out", default="run", help="output directory")
    p.add_argument("--deterministic-only", action="store_true",
                   help="skip sampling; write deterministic KPIs only")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="render SVG figures for a finished run")
    p.add_argument("run_dir")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
