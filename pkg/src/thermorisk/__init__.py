"""Probabilistic building thermal-load analysis under input uncertainty.

Latin Hypercube Monte Carlo campaigns through a monthly quasi-steady-state
load model, with KPI/KRI statistics, Shapiro-Wilk normality screening and
deterministic, expected-value, maximax and maximin rankings.
"""

__version__ = "0.1.0"

from .decision import (
    CRITERIA,
    CriterionRanking,
    OptionRisk,
    RiskReport,
    kendall_tau_distance,
    rank,
    rank_all,
    ranking_comparison,
    risk_report,
)
from .engine import (
    InvalidDraw,
    LoadBreakdown,
    ThermalModel,
    annual_load,
    build_thermal_model,
    monthly_balance,
    transmission_coefficient,
    ventilation_coefficient,
)
from .model import (
    ProjectConfig,
    ProjectError,
    derive_areas,
    load_climate,
    load_material_db,
    load_project,
    merge_material_properties,
    validate,
)
from .orchestrator import (
    CampaignAbort,
    CampaignConfig,
    OutputDistribution,
    draw_samples,
    run_deterministic,
    run_monte_carlo,
)
from .sampling import (
    Normal,
    PoissonScaled,
    SampleMatrix,
    UncertainInput,
    deterministic_point,
    lhs,
    normal_inv_cdf,
    poisson_inv_cdf,
    sample_value,
)
from .stats import histogram, normality_screen, shapiro_wilk, summarize
from .fixtures import example_project, bundled_climate
