"""Descriptive statistics, histograms and the Shapiro-Wilk normality test."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .sampling import normal_inv_cdf

__all__ = [
    "SummaryStats",
    "NormalityResult",
    "HistogramSpec",
    "quantile",
    "median_ci",
    "summarize",
    "quartile_index",
    "shapiro_wilk",
    "histogram",
    "normality_screen",
    "ALPHA",
]

ALPHA = 0.05


@dataclass(frozen=True)
class SummaryStats:
    n: int
    mean: float
    std: float
    variance: float
    min: float
    max: float
    q25: float
    q50: float
    q75: float
    median_ci_low: float
    median_ci_high: float


@dataclass(frozen=True)
class NormalityResult:
    w: float
    p_value: float
    n: int

    def rejects(self, alpha: float = ALPHA) -> bool:
        """Normality is rejected only when p is strictly below alpha."""
        return self.p_value < alpha


@dataclass(frozen=True)
class HistogramSpec:
    edges: np.ndarray
    counts: np.ndarray

    @property
    def bins(self) -> int:
        return len(self.counts)

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.counts.sum()


def quantile(sorted_x: Sequence[float], p: float) -> float:
    """Linear interpolation between order statistics at ``h = (n - 1) p + 1``."""
    n = len(sorted_x)
    h = (n - 1) * p
    i = int(math.floor(h))
    if i + 1 >= n:
        return float(sorted_x[n - 1])
    lo = float(sorted_x[i])
    return lo + (h - i) * (float(sorted_x[i + 1]) - lo)


def median_ci(sorted_x: Sequence[float], level: float = 0.95) -> tuple[float, float]:
    """Distribution-free confidence limits for the median.

    Returns order statistics ``x_(l)`` and ``x_(n-l+1)`` for the largest ``l``
    with ``P(l <= B <= n - l) >= level``, ``B ~ Binomial(n, 1/2)``. The tail
    sums are exact integers. Samples too small to reach ``level`` get the
    sample range.
    """
    n = len(sorted_x)
    total = 1 << n
    num, den = (level).as_integer_ratio()
    tail = 0  # sum_{i < l} C(n, i)
    best = 0
    for l in range(1, n // 2 + 1):
        tail += math.comb(n, l - 1)
        if (total - 2 * tail) * den >= num * total:
            best = l
        else:
            break
    if best == 0:
        return float(sorted_x[0]), float(sorted_x[-1])
    return float(sorted_x[best - 1]), float(sorted_x[n - best])


def summarize(samples: Sequence[float]) -> SummaryStats:
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    if n < 2:
        raise ValueError(f"summary needs at least 2 samples, got {n}")
    mean = math.fsum(x) / n
    var = math.fsum((v - mean) ** 2 for v in x) / (n - 1)
    std = math.sqrt(var)
    lo, hi = median_ci(x)
    return SummaryStats(
        n=n,
        mean=min(max(mean, float(x[0])), float(x[-1])),
        std=std,
        variance=std * std,
        min=float(x[0]),
        max=float(x[-1]),
        q25=quantile(x, 0.25),
        q50=quantile(x, 0.50),
        q75=quantile(x, 0.75),
        median_ci_low=lo,
        median_ci_high=hi,
    )


def quartile_index(stats: SummaryStats, value: float) -> int:
    """Which quarter (1-4) of the distribution ``value`` falls in."""
    if value <= stats.q25:
        return 1
    if value <= stats.q50:
        return 2
    if value <= stats.q75:
        return 3
    return 4


# Royston (1995), algorithm AS R94
_C1 = (0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056)
_C2 = (0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633)
_C3 = (0.5440, -0.39978, 0.025054, -6.714e-4)
_C4 = (1.3822, -0.77857, 0.062767, -0.0020322)
_C5 = (-1.5861, -0.31082, -0.083751, 0.0038915)
_C6 = (-0.4803, -0.082676, 0.0030302)
_G = (-2.273, 0.459)


def _poly(c: Sequence[float], x: float) -> float:
    acc = 0.0
    for v in reversed(c):
        acc = acc * x + v
    return acc


def _sw_coefficients(n: int) -> np.ndarray:
    """Weights for the upper half of the order statistics (length n // 2)."""
    nn2 = n // 2
    if n == 3:
        return np.array([math.sqrt(0.5)])
    an25 = n + 0.25
    m = np.array([normal_inv_cdf((i - 0.375) / an25) for i in range(1, nn2 + 1)])
    summ2 = 2.0 * math.fsum(m * m)
    ssumm2 = math.sqrt(summ2)
    rsn = 1.0 / math.sqrt(n)
    a = -m / 1.0
    a1 = _poly(_C1, rsn) - m[0] / ssumm2
    if n > 5:
        a2 = -m[1] / ssumm2 + _poly(_C2, rsn)
        fac = math.sqrt((summ2 - 2 * m[0] ** 2 - 2 * m[1] ** 2) / (1 - 2 * a1 ** 2 - 2 * a2 ** 2))
        a[2:] = -m[2:] / fac
        a[1] = a2
    else:
        fac = math.sqrt((summ2 - 2 * m[0] ** 2) / (1 - 2 * a1 ** 2))
        a[1:] = -m[1:] / fac
    a[0] = a1
    return a


def _sw_pvalue(w: float, n: int) -> float:
    if n == 3:
        p = 6.0 / math.pi * (math.asin(math.sqrt(w)) - math.pi / 3.0)
        return min(max(p, 0.0), 1.0)
    if w >= 1.0:
        return 1.0
    w1 = math.log(1.0 - w)
    if n <= 11:
        gamma = _poly(_G, n)
        if w1 >= gamma:
            return 1e-99
        y = -math.log(gamma - w1)
        mu = _poly(_C3, n)
        sigma = math.exp(_poly(_C4, n))
    else:
        xx = math.log(n)
        y = w1
        mu = _poly(_C5, xx)
        sigma = math.exp(_poly(_C6, xx))
    z = (y - mu) / sigma
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def shapiro_wilk(samples: Sequence[float]) -> NormalityResult:
    """Shapiro-Wilk W and its p-value for 3 <= n <= 5000."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    if n < 3:
        raise ValueError(f"Shapiro-Wilk needs n >= 3, got {n}")
    if n > 5000:
        raise ValueError(f"Shapiro-Wilk approximation is valid up to n = 5000, got {n}")
    rng = x[-1] - x[0]
    if not rng > 0:
        raise ValueError("Shapiro-Wilk is undefined for zero-range data")
    # scale by the range first; W is location/scale free
    x = (x - x[0]) / rng
    a = _sw_coefficients(n)
    nn2 = n // 2
    num = math.fsum(a * (x[::-1][:nn2] - x[:nn2]))
    mean = math.fsum(x) / n
    ssq = math.fsum((x - mean) ** 2)
    w = min(num * num / ssq, 1.0)
    return NormalityResult(w=w, p_value=_sw_pvalue(w, n), n=n)


def histogram(samples: Sequence[float], bins: int) -> HistogramSpec:
    """Equal-width bins over [min, max]; the last bin is closed on the right."""
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    x = np.asarray(samples, dtype=float)
    if x.size < 1:
        raise ValueError("histogram needs at least one sample")
    counts, edges = np.histogram(x, bins=bins)
    return HistogramSpec(edges=edges, counts=counts)


def normality_screen(samples_by_option: Mapping[int, Sequence[float]],
                     alpha: float = ALPHA) -> list[tuple[int, NormalityResult, bool]]:
    """``(option id, result, rejected)`` per option, sorted by id."""
    rows = []
    for oid in sorted(samples_by_option):
        res = shapiro_wilk(samples_by_option[oid])
        rows.append((oid, res, res.rejects(alpha)))
    return rows
