import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import poisson

from oracles import poisson_quantile_by_summation
from thermorisk.sampling import (
    Normal,
    PoissonScaled,
    UncertainInput,
    deterministic_point,
    lhs,
    normal_inv_cdf,
    poisson_inv_cdf,
    redraw_in_stratum,
    sample_value,
    write_samples_csv,
)

mpmath.mp.dps = 40

WALL = UncertainInput(1, "wall_rsi", "option.wall_rsi", 3.7, Normal(0.37))
EQUIP = UncertainInput(5, "equipment", "loads.equipment_per_area", 10.765, PoissonScaled(0.10))


def _true_quantile(p):
    # bisection on Phi at 40 digits; erfinv(1 - 2p) cancels in the far tail
    p = mpmath.mpf(p)
    lo, hi = mpmath.mpf(-40), mpmath.mpf(10)
    for _ in range(120):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if mpmath.ncdf(mid) < p else (lo, mid)
    return float((lo + hi) / 2)


class TestNormalQuantile:
    def test_median(self):
        assert normal_inv_cdf(0.5) == 0.0

    def test_975(self):
        # mpmath erfinv: 1.959963984540054
        assert normal_inv_cdf(0.975) == pytest.approx(1.9599640, abs=5e-8)
        assert abs(normal_inv_cdf(0.975) - _true_quantile(0.975)) <= 1e-8

    def test_three_sigma(self):
        assert normal_inv_cdf(0.0013499) == pytest.approx(-3.0, abs=1e-5)
        assert abs(normal_inv_cdf(0.0013499) - _true_quantile(0.0013499)) <= 1e-8

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, float("nan")])
    def test_domain(self, p):
        with pytest.raises(ValueError):
            normal_inv_cdf(p)

    def test_roundtrip_grid(self):
        for x in np.linspace(-6, 6, 241):
            p = float(mpmath.ncdf(x))
            assert abs(normal_inv_cdf(p) - x) <= 1e-6

    def test_absolute_error_vs_high_precision(self):
        ps = np.concatenate([np.logspace(-300, -1, 60), np.linspace(0.01, 0.99, 99),
                             1 - np.logspace(-15, -2, 30)])
        for p in ps:
            assert abs(normal_inv_cdf(p) - _true_quantile(p)) <= 1e-8

    @given(st.floats(0.5, 1.0, exclude_max=True))
    def test_antithetic(self, p):
        # 1 - p is exact for p >= 0.5, so the pair is an exact complement
        assert abs(normal_inv_cdf(p) + normal_inv_cdf(1.0 - p)) / 2 <= 1e-12

    @given(st.floats(1e-300, 1.0, exclude_max=True), st.floats(1e-300, 1.0, exclude_max=True))
    def test_monotone(self, a, b):
        lo, hi = sorted((a, b))
        assert normal_inv_cdf(lo) <= normal_inv_cdf(hi)


class TestPoissonQuantile:
    def test_examples(self):
        assert poisson_inv_cdf(0.36, 1.0) == 0
        assert poisson_inv_cdf(0.37, 1.0) == 1
        assert poisson_inv_cdf(0.5, 100.0) == 100

    @pytest.mark.parametrize("lam", [0.3, 1.0, 4.5, 30.0, 49.9, 50.0, 100.0, 400.0])
    def test_against_summation(self, lam):
        for p in np.linspace(0.001, 0.999, 211):
            assert poisson_inv_cdf(p, lam) == poisson_quantile_by_summation(p, lam)

    @pytest.mark.parametrize("lam", [1e3, 1e5])
    def test_large_rate_against_scipy(self, lam):
        for p in np.linspace(0.001, 0.999, 97):
            assert poisson_inv_cdf(p, lam) == int(poisson.ppf(p, lam))

    @given(st.floats(0.01, 0.99), st.floats(0.01, 0.99), st.sampled_from([1.0, 100.0, 2500.0]))
    def test_monotone(self, a, b, lam):
        lo, hi = sorted((a, b))
        assert poisson_inv_cdf(lo, lam) <= poisson_inv_cdf(hi, lam)

    @pytest.mark.parametrize("p,lam", [(0.0, 1.0), (1.0, 1.0), (0.5, 0.0), (0.5, -2.0)])
    def test_domain(self, p, lam):
        with pytest.raises(ValueError):
            poisson_inv_cdf(p, lam)


class TestSampleValue:
    def test_normal_median(self):
        assert sample_value(WALL, 0.5) == 3.7

    def test_scaled_poisson_median(self):
        assert sample_value(EQUIP, 0.5) == pytest.approx(10.765, rel=1e-12)

    def test_scaled_poisson_floor(self):
        assert sample_value(EQUIP, 1e-300) == 0.0

    def test_scaled_poisson_moments(self):
        # plain Poisson(100) draws, scaled by the quantum q = mean * cv^2
        q = 10.765 * 0.01
        k = np.random.default_rng(3).poisson(100, 10**6)
        v = q * k
        assert v.mean() == pytest.approx(10.765, rel=2e-3)
        assert v.std() / v.mean() == pytest.approx(0.10, rel=5e-3)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            UncertainInput(1, "a", "loads.x", 1.0, Normal(0.0))
        with pytest.raises(ValueError):
            UncertainInput(1, "a", "loads.x", 1.0, PoissonScaled(1.0))
        with pytest.raises(ValueError):
            UncertainInput(1, "a", "loads.x", 0.0, PoissonScaled(0.1))


class TestLhs:
    def test_four_strata(self):
        m = lhs([WALL], 4, seed=11)
        p = np.sort(m.probabilities[:, 0])
        bounds = [(0, .25), (.25, .5), (.5, .75), (.75, 1)]
        for pj, (lo, hi) in zip(p, bounds):
            assert lo < pj <= hi and pj < 1

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**64 - 1), st.integers(2, 300))
    def test_stratification(self, seed, n):
        m = lhs([WALL, EQUIP], n, seed)
        for i in range(2):
            buckets = np.sort(np.ceil(m.probabilities[:, i] * n).astype(int))
            assert np.array_equal(buckets, np.arange(1, n + 1))
            assert np.array_equal(np.sort(m.strata[:, i]), np.arange(1, n + 1))

    def test_determinism(self):
        a = lhs([WALL, EQUIP], 500, 42)
        b = lhs([WALL, EQUIP], 500, 42)
        assert a == b
        assert a.values.tobytes() == b.values.tobytes()
        assert a != lhs([WALL, EQUIP], 500, 43)

    def test_column_independence(self):
        # column i depends only on (seed, i, input), not on its neighbours
        a = lhs([WALL, EQUIP], 100, 5)
        b = lhs([UncertainInput(9, "other", "loads.x", 1.0, Normal(2.0)), EQUIP], 100, 5)
        assert np.array_equal(a.values[:, 1], b.values[:, 1])

    def test_poisson_column_quantized(self):
        m = lhs([EQUIP], 500, 1)
        k = m.values[:, 0] / (10.765 * 0.1 ** 2)
        assert np.allclose(k, np.round(k), atol=1e-9) and np.all(k >= 0)

    def test_errors(self):
        with pytest.raises(ValueError):
            lhs([WALL], 1, 0)
        with pytest.raises(ValueError):
            lhs([], 10, 0)
        with pytest.raises(ValueError):
            lhs([WALL], 10, -1)

    def test_immutable(self):
        m = lhs([WALL], 10, 0)
        with pytest.raises(ValueError):
            m.values[0, 0] = 1.0

    def test_redraw_stays_in_stratum(self):
        for attempt in range(20):
            p, v = redraw_in_stratum(WALL, 7, 0, 3, 17, 50, attempt)
            assert 16 / 50 < p <= 17 / 50
            assert v == sample_value(WALL, p)


class TestDeterministicPoint:
    def test_table2_means(self):
        table2 = [("equipment", 10.765), ("infiltration", 0.0003), ("lighting", 10.55),
                  ("people", 0.07), ("vent_area", 0.0006), ("vent_person", 0.005)]
        inputs = [UncertainInput(i + 1, n, "loads." + n, m, Normal(m / 10))
                  for i, (n, m) in enumerate(table2)]
        assert list(deterministic_point(inputs)) == [m for _, m in table2]

    def test_single(self):
        assert list(deterministic_point([UncertainInput(1, "a", "t", 1.0, Normal(1))])) == [1.0]

    def test_order(self):
        a = UncertainInput(1, "a", "t", 2.0, Normal(1))
        b = UncertainInput(2, "b", "t", 5.0, Normal(1))
        assert list(deterministic_point([a, b])) == [2.0, 5.0]
        assert list(deterministic_point([b, a])) == [5.0, 2.0]

    def test_empty(self):
        with pytest.raises(ValueError):
            deterministic_point([])


def test_samples_csv(tmp_path):
    m = lhs([WALL, EQUIP], 5, 3)
    path = tmp_path / "samples.csv"
    write_samples_csv(m, path)
    lines = path.read_text().split("\n")
    assert lines[0] == "wall_rsi,equipment"
    assert len(lines) == 7 and lines[-1] == ""
    first = [float(c) for c in lines[1].split(",")]
    assert first == [float(f"{v:.9g}") for v in m.values[0]]
    assert math.isclose(first[0], m.values[0, 0], rel_tol=1e-8)
