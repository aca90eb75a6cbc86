"""The eleven acceptance criteria, each at its stated tolerance and time budget.

Every test prints one ``criterion N PASS|FAIL`` line; the lines are also
collected into a section at the end of the pytest run.
"""

import time
from contextlib import contextmanager
from dataclasses import replace

import numpy as np

import reference_summary as ref
from oracles import sort_interpolate, sw_dataset
from svgcheck import check_run
from test_stats import SW_REFERENCE
from thermorisk.cli import main
from thermorisk.decision import CRITERIA, rank
from thermorisk.engine import (
    annual_load,
    build_thermal_model,
    monthly_balance,
    transmission_coefficient,
    ventilation_coefficient,
)
from thermorisk.fixtures import PROJECT_FILE
from thermorisk.model import ClimateMonth
from thermorisk.orchestrator import (
    CampaignConfig,
    run_deterministic,
    run_monte_carlo,
    write_results_csv,
)
from thermorisk.sampling import Normal, PoissonScaled, UncertainInput, deterministic_point, lhs
from thermorisk.stats import quartile_index, shapiro_wilk, summarize


@contextmanager
def criterion(log, number, title, budget_s):
    """Time the body, then record and print one PASS/FAIL line for it."""
    state = {"detail": ""}
    start = time.perf_counter()
    ok = False
    try:
        yield state
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < budget_s
        verdict = "PASS" if ok and within else "FAIL"
        timing = f"{elapsed:.2f}s / {budget_s}s budget"
        if not within:
            timing += " EXCEEDED"
        line = f"criterion {number:>2} {verdict}: {title} [{state['detail']}] ({timing})"
        print(line)
        log.append(line)
    assert within, line


def test_01_decision_fixture(acceptance_log):
    with criterion(acceptance_log, 1, "decision orderings from reference summaries", 1) as c:
        report = ref.report()
        got = {k: rank(k, report).order for k in CRITERIA}
        c["detail"] = ", ".join(f"{k}={list(v)}" for k, v in got.items())
        assert got == ref.ORDERS


def test_02_kri_consistency(acceptance_log):
    with criterion(acceptance_log, 2, "variance equals std squared within 0.5%", 1) as c:
        rel = {k: abs(ref.STD[k] ** 2 - ref.VARIANCE[k]) / ref.VARIANCE[k] for k in ref.STD}
        c["detail"] = "max rel err %.2e" % max(rel.values())
        assert all(r <= 0.005 for r in rel.values())


def test_03_lhs_stratification(acceptance_log):
    wall = UncertainInput(1, "wall_rsi", "option.wall_rsi", 3.7, Normal(0.37))
    equip = UncertainInput(5, "equipment", "loads.equipment_per_area", 10.765, PoissonScaled(0.1))
    with criterion(acceptance_log, 3, "each of 500 strata hit once per column, 100 seeds", 10) as c:
        expected = np.arange(1, 501)
        bad = 0
        for seed in range(100):
            m = lhs([wall, equip], 500, seed)
            for col in range(2):
                strata = np.sort(np.ceil(m.probabilities[:, col] * 500).astype(int))
                bad += not np.array_equal(strata, expected)
        c["detail"] = f"{bad} failing columns of 200"
        assert bad == 0


def test_04_moment_recovery(acceptance_log):
    wall = UncertainInput(1, "wall_rsi", "option.wall_rsi", 3.7, Normal(0.37))
    equip = UncertainInput(5, "equipment", "loads.equipment_per_area", 10.765, PoissonScaled(0.1))
    with criterion(acceptance_log, 4, "moment recovery over 100 seeds", 30) as c:
        normal_ok = poisson_ok = 0
        for seed in range(100):
            m = lhs([wall, equip], 500, 10_000 + seed)
            w, e = m.values[:, 0], m.values[:, 1]
            normal_ok += abs(w.mean() - 3.7) <= 0.01 and 0.32 <= w.std(ddof=1) <= 0.42
            poisson_ok += 0.085 <= e.std(ddof=1) / e.mean() <= 0.115
        c["detail"] = f"normal {normal_ok}/100, scaled Poisson {poisson_ok}/100"
        assert normal_ok >= 95 and poisson_ok >= 95


def test_05_shapiro_wilk(acceptance_log):
    with criterion(acceptance_log, 5, "Shapiro-Wilk oracle, size and power", 60) as c:
        dw = dp = 0.0
        for n, (w_ref, p_ref) in SW_REFERENCE.items():
            r = shapiro_wilk(sw_dataset(n))
            dw, dp = max(dw, abs(r.w - w_ref)), max(dp, abs(r.p_value - p_ref))
        rng = np.random.default_rng(515)
        size = np.mean([shapiro_wilk(rng.normal(size=500)).rejects() for _ in range(200)])
        power = np.mean([shapiro_wilk(rng.exponential(size=500)).rejects() for _ in range(200)])
        c["detail"] = f"max dW {dw:.1e}, max dp {dp:.1e}, size {size:.3f}, power {power:.3f}"
        assert dw <= 1e-3 and dp <= 1e-2
        assert 0.02 <= size <= 0.09 and power >= 0.99


def test_06_deterministic_identity(acceptance_log, project, climate):
    with criterion(acceptance_log, 6, "deterministic run equals engine at means bitwise", 1) as c:
        y = run_deterministic(project, climate)
        x = deterministic_point(project.uncertain)
        direct = {o.id: annual_load(build_thermal_model(o, project, x), climate).annual_load_per_area
                  for o in project.options}
        c["detail"] = ", ".join(f"{k}: {v:.6f}" for k, v in y.items())
        assert y == direct


def test_07_determinism(acceptance_log, project, climate, tmp_path):
    with criterion(acceptance_log, 7, "results.csv identical at 1, 2 and max workers", 30) as c:
        blobs, timings = [], []
        for jobs in (1, 2, None):
            t = time.perf_counter()
            dists = run_monte_carlo(project, climate, CampaignConfig(500, 7, jobs=jobs))
            timings.append(time.perf_counter() - t)
            path = tmp_path / f"results_{jobs}.csv"
            write_results_csv(dists, path)
            blobs.append(path.read_bytes())
        c["detail"] = "campaign seconds " + ", ".join(f"{t:.2f}" for t in timings)
        assert blobs[0] == blobs[1] == blobs[2]
        assert max(timings) < 10


def test_08_engine_physics(acceptance_log, project, climate):
    with criterion(acceptance_log, 8, "finite-difference monotonicity and clamp continuity", 5) as c:
        x0 = deterministic_point(project.uncertain)
        checks = 0
        for o in project.options:
            m = build_thermal_model(o, project, x0)
            for f in ("wall_rsi", "floor_rsi", "roof_rsi"):
                v = getattr(m, f)
                up = annual_load(replace(m, **{f: 1.01 * v}), climate).annual_heating
                down = annual_load(replace(m, **{f: 0.99 * v}), climate).annual_heating
                assert up - down <= 0
                checks += 1
            for f in ("equipment_per_area", "lighting_per_area", "people_per_area"):
                v = getattr(m.loads, f)
                up = annual_load(replace(m, loads=replace(m.loads, **{f: 1.01 * v})), climate)
                down = annual_load(replace(m, loads=replace(m.loads, **{f: 0.99 * v})), climate)
                assert up.annual_cooling - down.annual_cooling >= 0
                checks += 1
            # clamp sweep: slope of both branches is bounded by H t / 1000
            h = transmission_coefficient(m) + ventilation_coefficient(m)
            temps = np.linspace(-10, 40, 20001)
            irr = climate.months[6].irradiance
            q = np.array([monthly_balance(m, ClimateMonth(7, t, 744.0, irr), h) for t in temps])
            bound = h * 744.0 / 1000.0 * (temps[1] - temps[0]) * (1 + 1e-9)
            assert np.max(np.abs(np.diff(q, axis=0))) <= bound
            checks += 1
        c["detail"] = f"{checks} checks over 4 options"


def test_09_deterministic_vs_mean(acceptance_log, project, climate):
    with criterion(acceptance_log, 9, "deterministic KPI differs from Monte Carlo mean", 10) as c:
        dists = run_monte_carlo(project, climate, CampaignConfig(500, 7))
        parts = []
        for oid, d in dists.items():
            s = summarize(d.samples)
            parts.append(f"O{oid} det {d.deterministic_kpi:.2f} mean {s.mean:.2f} "
                         f"q{quartile_index(s, d.deterministic_kpi)}")
            assert d.deterministic_kpi != s.mean
        c["detail"] = "; ".join(parts)


def test_10_quantile_brute_force(acceptance_log):
    with criterion(acceptance_log, 10, "quantiles equal sort-and-interpolate exactly", 5) as c:
        rng = np.random.default_rng(10)
        mismatches = 0
        for _ in range(1000):
            x = rng.normal(150, 25, int(rng.integers(2, 51)))
            s = summarize(x)
            for p, got in ((0.25, s.q25), (0.5, s.q50), (0.75, s.q75)):
                mismatches += got != sort_interpolate(x.tolist(), p)
        c["detail"] = f"{mismatches} mismatches in 3000 quantiles"
        assert mismatches == 0


def test_11_report_consistency(acceptance_log, tmp_path):
    out = tmp_path / "run"
    assert main(["run", str(PROJECT_FILE), "--samples", "500", "--seed", "7",
                 "--out", str(out)]) == 0
    with criterion(acceptance_log, 11, "SVG annotations equal JSON values", 5) as c:
        assert main(["report", str(out)]) == 0
        checked, problems = check_run(out)
        c["detail"] = f"{checked} annotations checked, {len(problems)} mismatches"
        assert checked > 0 and problems == []

