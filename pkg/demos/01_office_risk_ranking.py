"""Deterministic versus probabilistic ranking of four office design options.

Run with:  python demos/01_office_risk_ranking.py
"""

# %% Load the bundled four-option office and its monthly climate.
from thermorisk import bundled_climate, example_project
from thermorisk.decision import rank_all, ranking_comparison, risk_report
from thermorisk.orchestrator import CampaignConfig, run_deterministic, run_monte_carlo
from thermorisk.stats import normality_screen, quartile_index, summarize

project = example_project()
climate = bundled_climate()
print(f"{project.name}: {len(project.options)} options, {len(project.uncertain)} uncertain inputs")

# %% The usual single-run answer: every uncertain input held at its mean.
y_det = run_deterministic(project, climate)
for oid, y in y_det.items():
    print(f"  option {oid}: {y:7.2f} kWh/m2")

# %% Now propagate the uncertainty: 500 Latin hypercube rows shared by all options.
dists = run_monte_carlo(project, climate, CampaignConfig(n_samples=500, seed=7, jobs=0))

for oid, d in dists.items():
    s = summarize(d.samples)
    q = quartile_index(s, d.deterministic_kpi)
    print(f"  option {oid}: mean {s.mean:7.2f}  std {s.std:5.2f}  "
          f"range [{s.min:6.2f}, {s.max:6.2f}]  y_det sits in quartile {q}")

# %% Is a normal approximation of each output safe?  Shapiro-Wilk at alpha 0.05.
for oid, result, rejected in normality_screen({k: d.samples for k, d in dists.items()}):
    verdict = "reject normality" if rejected else "cannot reject"
    print(f"  option {oid}: W={result.w:.4f} p={result.p_value:.4f} -> {verdict}")

# %% Rank the options four ways and see where the orderings disagree.
rankings = rank_all(risk_report(dists))
for name, r in rankings.items():
    print(f"  {name:>15}: {' > '.join(map(str, r.order))}")

disagreements = [(a, b, d) for a, b, d, differs in ranking_comparison(rankings).pairs if differs]
for a, b, d in disagreements:
    print(f"  {a} vs {b}: {d} swapped pair(s)")
if not disagreements:
    print("  all four criteria agree on this climate and engine")
