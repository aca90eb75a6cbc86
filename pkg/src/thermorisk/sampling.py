"""Probability distributions, inverse CDFs and Latin Hypercube sampling.

All randomness is derived from a single integer seed. Each column of a sample
matrix owns an independent counter-based stream keyed by ``(seed, column)``,
so a matrix does not depend on the order in which columns are produced.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np

__all__ = [
    "Normal",
    "PoissonScaled",
    "UncertainInput",
    "SampleMatrix",
    "normal_inv_cdf",
    "poisson_inv_cdf",
    "sample_value",
    "lhs",
    "redraw_in_stratum",
    "deterministic_point",
    "write_samples_csv",
]

# Wichura (1988), algorithm AS 241 (PPND16).
_A = (
    3.3871328727963666080e0,
    1.3314166789178437745e2,
    1.9715909503065514427e3,
    1.3731693765509461125e4,
    4.5921953931549871457e4,
    6.7265770927008700853e4,
    3.3430575583588128105e4,
    2.5090809287301226727e3,
)
_B = (
    1.0,
    4.2313330701600911252e1,
    6.8718700749205790830e2,
    5.3941960214247511077e3,
    2.1213794301586595867e4,
    3.9307895800092710610e4,
    2.8729085735721942674e4,
    5.2264952788528545610e3,
)
_C = (
    1.42343711074968357734e0,
    4.63033784615654529590e0,
    5.76949722146069140550e0,
    3.64784832476320460504e0,
    1.27045825245236838258e0,
    2.41780725177450611770e-1,
    2.27238449892691845833e-2,
    7.74545014278341407640e-4,
)
_D = (
    1.0,
    2.05319162663775882187e0,
    1.67638483018380384940e0,
    6.89767334985100004550e-1,
    1.48103976427480074590e-1,
    1.51986665636164571966e-2,
    5.47593808499534494600e-4,
    1.05075007164441684324e-9,
)
_E = (
    6.65790464350110377720e0,
    5.46378491116411436990e0,
    1.78482653991729133580e0,
    2.96560571828504891230e-1,
    2.65321895265761230930e-2,
    1.24266094738807843860e-3,
    2.71155556874348757815e-5,
    2.01033439929228813265e-7,
)
_F = (
    1.0,
    5.99832206555887937690e-1,
    1.36929880922735805310e-1,
    1.48753612908506148525e-2,
    7.86869131145613259100e-4,
    1.84631831751005468180e-5,
    1.42151175831644588870e-7,
    2.04426310338993978564e-15,
)


def _poly(coef: Sequence[float], x: float) -> float:
    acc = 0.0
    for c in reversed(coef):
        acc = acc * x + c
    return acc


def _lower_quantile(p: float) -> float:
    # p in (0, 0.5]
    q = p - 0.5
    if q >= -0.425:
        r = 0.180625 - q * q
        return q * _poly(_A, r) / _poly(_B, r)
    r = math.sqrt(-math.log(p))
    if r <= 5.0:
        r -= 1.6
        return -_poly(_C, r) / _poly(_D, r)
    r -= 5.0
    return -_poly(_E, r) / _poly(_F, r)


def normal_inv_cdf(p: float) -> float:
    """Standard normal quantile, accurate to about 1e-16 relative.

    The upper half is evaluated through the lower tail, so that
    ``normal_inv_cdf(1 - p) == -normal_inv_cdf(p)`` whenever ``1 - p`` is exact.
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must lie in (0, 1), got {p!r}")
    if p > 0.5:
        return -_lower_quantile(1.0 - p)
    return _lower_quantile(p)


def poisson_inv_cdf(p: float, lam: float) -> int:
    """Smallest integer ``k`` with ``P(K <= k) >= p`` for ``K ~ Poisson(lam)``."""
    p = float(p)
    lam = float(lam)
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must lie in (0, 1), got {p!r}")
    if not (lam > 0.0 and math.isfinite(lam)):
        raise ValueError(f"Poisson rate must be positive and finite, got {lam!r}")

    if lam < 50.0:
        k = 0
        pmf = math.exp(-lam)
        cdf = pmf
        while cdf < p:
            k += 1
            pmf *= lam / k
            cdf += pmf
            if pmf == 0.0 and k > lam:
                break  # cdf has saturated below p through rounding
        return k

    # Cornish-Fisher start, then exact local walk.
    z = normal_inv_cdf(p)
    k = max(0, int(math.floor(lam + math.sqrt(lam) * z + (z * z - 1.0) / 6.0)))
    pmf_k = math.exp(k * math.log(lam) - lam - math.lgamma(k + 1.0))
    cdf = pmf_k
    term = pmf_k
    j = k
    while j > 0:
        term *= j / lam
        j -= 1
        cdf += term
        if term < 1e-18 * cdf:
            break

    if cdf >= p:
        while k > 0 and cdf - pmf_k >= p:
            cdf -= pmf_k
            pmf_k *= k / lam
            k -= 1
        return k
    while cdf < p:
        k += 1
        pmf_k *= lam / k
        cdf += pmf_k
        if pmf_k == 0.0:
            break
    return k


@dataclass(frozen=True)
class Normal:
    sigma: float


@dataclass(frozen=True)
class PoissonScaled:
    """Poisson count scaled so the value has a given mean and coefficient of variation.

    ``value = q * K`` with ``K ~ Poisson(1/cv**2)`` and ``q = mean * cv**2``.
    """

    cv: float


Distribution = Union[Normal, PoissonScaled]


@dataclass(frozen=True)
class UncertainInput:
    """One uncertain design variable.

    ``relative`` inputs carry a dimensionless multiplier with mean 1.0 that is
    applied to a per-option field; absolute inputs replace the field outright.
    """

    id: int
    name: str
    target: str
    mean: float
    dist: Distribution
    relative: bool = False

    def __post_init__(self):
        if isinstance(self.dist, Normal):
            if not self.dist.sigma > 0:
                raise ValueError(f"{self.name}: Normal sigma must be > 0")
        elif isinstance(self.dist, PoissonScaled):
            if not 0 < self.dist.cv < 1:
                raise ValueError(f"{self.name}: PoissonScaled cv must lie in (0, 1)")
            if not self.mean > 0:
                raise ValueError(f"{self.name}: PoissonScaled mean must be > 0")
        else:
            raise TypeError(f"{self.name}: unknown distribution {self.dist!r}")

    @property
    def label(self) -> str:
        return f"x_uncer_{self.id} ({self.name})"


def sample_value(inp: UncertainInput, p: float) -> float:
    """Map a probability to a value of ``inp`` through its inverse CDF."""
    d = inp.dist
    if isinstance(d, Normal):
        return inp.mean + d.sigma * normal_inv_cdf(p)
    cv2 = d.cv * d.cv
    return (inp.mean * cv2) * poisson_inv_cdf(p, 1.0 / cv2)


@dataclass(frozen=True)
class SampleMatrix:
    """An N x k Latin Hypercube draw.

    ``probabilities[j, i]`` is the underlying uniform in stratum ``strata[j, i]``
    (1-based) and ``values[j, i]`` its image under input ``i``'s inverse CDF.
    """

    names: tuple[str, ...]
    probabilities: np.ndarray
    values: np.ndarray
    strata: np.ndarray
    seed: int
    redrawn: tuple[tuple[int, int], ...] = field(default=())

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def columns(self) -> list[np.ndarray]:
        return [self.values[:, i] for i in range(self.values.shape[1])]

    def row(self, j: int) -> np.ndarray:
        return self.values[j]

    def __eq__(self, other):
        if not isinstance(other, SampleMatrix):
            return NotImplemented
        return (
            self.names == other.names
            and self.seed == other.seed
            and np.array_equal(self.probabilities, other.probabilities)
            and np.array_equal(self.values, other.values)
            and np.array_equal(self.strata, other.strata)
        )

    __hash__ = None


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def _stream(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=key)
    return np.random.Generator(np.random.Philox(ss))


def _in_stratum(stratum: np.ndarray, u: np.ndarray, n: int) -> np.ndarray:
    # stratum is 1-based; (stratum - u)/n lies in ((s-1)/n, s/n]
    p = (stratum - u) / n
    return np.minimum(p, np.nextafter(1.0, 0.0))


def lhs(inputs: Sequence[UncertainInput], n: int, seed: int) -> SampleMatrix:
    """Latin Hypercube sample of ``n`` rows, one column per input.

    Each column uses its own stream: a random permutation assigns strata to
    rows, then a uniform draw places the point inside the stratum.
    """
    if n < 2:
        raise ValueError(f"LHS needs n >= 2, got {n}")
    if not inputs:
        raise ValueError("LHS needs at least one uncertain input")
    seed = _check_seed(seed)
    k = len(inputs)
    probs = np.empty((n, k))
    values = np.empty((n, k))
    strata = np.empty((n, k), dtype=np.int64)
    for i, inp in enumerate(inputs):
        rng = _stream(seed, 0, i)
        s = rng.permutation(n) + 1
        u = rng.random(n)
        p = _in_stratum(s, u, n)
        strata[:, i] = s
        probs[:, i] = p
        values[:, i] = [sample_value(inp, pj) for pj in p]
    for a in (probs, values, strata):
        a.flags.writeable = False
    return SampleMatrix(tuple(inp.name for inp in inputs), probs, values, strata, seed)


def redraw_in_stratum(
    inp: UncertainInput, seed: int, column: int, row: int, stratum: int, n: int, attempt: int
) -> tuple[float, float]:
    """Fresh ``(p, value)`` in the same stratum from a retry substream.

    The substream is keyed by ``(seed, column, row, attempt)`` and never
    overlaps the primary column streams.
    """
    rng = _stream(_check_seed(seed), 1, column, row, attempt)
    p = float(_in_stratum(np.array([stratum]), np.array([rng.random()]), n)[0])
    return p, sample_value(inp, p)


def deterministic_point(inputs: Sequence[UncertainInput]) -> np.ndarray:
    if not inputs:
        raise ValueError("deterministic point needs at least one input")
    return np.array([inp.mean for inp in inputs], dtype=float)


def fmt9(x: float) -> str:
    """Decimal text with 9 significant digits."""
    return f"{x:.9g}"


def write_samples_csv(matrix: SampleMatrix, path: Union[str, Path]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(matrix.names)
        for row in matrix.values:
            w.writerow([fmt9(v) for v in row])
