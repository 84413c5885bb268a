"""The eight benchmark sampling densities (a)-(h).

Parameters live in :data:`MIXTURE_TABLE`; (e), (g) and (h) are the
Marron-Wand skewed unimodal, claw and skewed bimodal densities, the others
are reconstructed from plotted shapes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

__all__ = [
    "RNG_ALGORITHM",
    "GaussianMixture",
    "Uniform",
    "BenchmarkDensity",
    "MIXTURE_TABLE",
    "catalog",
    "get_density",
    "pdf",
    "dpdf",
    "sample",
    "catalog_rows",
]

RNG_ALGORITHM = "numpy.random.Generator(PCG64)"

# label -> (name, weights, means, sds); None marks the uniform
MIXTURE_TABLE = {
    "a": ("Gaussian", [1.0], [0.0], [1.0]),
    "b": ("Uniform", None, None, None),
    "c": ("Scale mixture", [0.5, 0.5], [0.0, 0.0], [1.0, 0.1]),
    "d": ("Simple bimodal", [0.5, 0.5], [-1.5, 1.5], [0.5, 0.5]),
    "e": ("Skew", [0.2, 0.2, 0.6], [0.0, 0.5, 13.0 / 12.0], [1.0, 2.0 / 3.0, 5.0 / 9.0]),
    "f": ("Spiked bimodal", [0.5, 0.5], [-1.0, 1.0], [0.3, 0.05]),
    "g": (
        "Claw",
        [0.5] + [0.1] * 5,
        [0.0] + [j / 2.0 - 1.0 for j in range(5)],
        [1.0] + [0.1] * 5,
    ),
    "h": ("Skew bimodal", [0.75, 0.25], [0.0, 1.5], [1.0, 1.0 / 3.0]),
}


@dataclass(frozen=True)
class GaussianMixture:
    weights: tuple
    means: tuple
    sds: tuple

    def __post_init__(self):
        w = np.asarray(self.weights)
        if not (len(self.weights) == len(self.means) == len(self.sds)):
            raise ValueError("mixture parameter lengths differ")
        if abs(w.sum() - 1.0) > 1e-12 or np.any(w <= 0):
            raise ValueError("mixture weights must be positive and sum to 1")
        if np.any(np.asarray(self.sds) <= 0):
            raise ValueError("component sds must be positive")

    def pdf(self, x):
        x = np.asarray(x, dtype=float)[..., None]
        return np.sum(
            np.asarray(self.weights) * stats.norm.pdf(x, self.means, self.sds), axis=-1
        )

    def dpdf(self, x):
        x = np.asarray(x, dtype=float)[..., None]
        mu = np.asarray(self.means)
        s = np.asarray(self.sds)
        comp = -(x - mu) / s**2 * stats.norm.pdf(x, mu, s)
        return np.sum(np.asarray(self.weights) * comp, axis=-1)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)[..., None]
        return np.sum(
            np.asarray(self.weights) * stats.norm.cdf(x, self.means, self.sds), axis=-1
        )

    def mean(self):
        return float(np.dot(self.weights, self.means))

    def sd(self):
        w, mu, s = map(np.asarray, (self.weights, self.means, self.sds))
        m = np.dot(w, mu)
        return float(np.sqrt(np.dot(w, s**2 + mu**2) - m**2))

    def sample(self, n, rng):
        comp = rng.choice(len(self.weights), size=n, p=self.weights)
        mu = np.asarray(self.means)[comp]
        s = np.asarray(self.sds)[comp]
        return mu + s * rng.standard_normal(n)


@dataclass(frozen=True)
class Uniform:
    lo: float = 0.0
    hi: float = 1.0

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.lo) & (x <= self.hi), 1.0 / (self.hi - self.lo), 0.0)

    def cdf(self, x):
        return np.clip((np.asarray(x, dtype=float) - self.lo) / (self.hi - self.lo), 0.0, 1.0)

    def mean(self):
        return 0.5 * (self.lo + self.hi)

    def sd(self):
        return (self.hi - self.lo) / np.sqrt(12.0)

    def sample(self, n, rng):
        return rng.uniform(self.lo, self.hi, size=n)


@dataclass(frozen=True)
class BenchmarkDensity:
    label: str
    name: str
    form: object

    @property
    def differentiable(self) -> bool:
        return isinstance(self.form, GaussianMixture)

    def pdf(self, x):
        return pdf(self, x)

    def dpdf(self, x):
        return dpdf(self, x)

    def cdf(self, x):
        return self.form.cdf(x)

    def sample(self, n, seed):
        return sample(self, n, seed)

    def support(self, n_sd=5.0):
        """Interval covering the density to ``n_sd`` standard deviations.

        For mixtures this is widened to reach every component's own
        ``n_sd`` range, so narrow spikes are never truncated.
        """
        m, s = self.form.mean(), self.form.sd()
        lo, hi = m - n_sd * s, m + n_sd * s
        if isinstance(self.form, GaussianMixture):
            mu, sd = np.asarray(self.form.means), np.asarray(self.form.sds)
            lo = min(lo, float(np.min(mu - n_sd * sd)))
            hi = max(hi, float(np.max(mu + n_sd * sd)))
        return lo, hi


def _build(label):
    name, w, mu, sd = MIXTURE_TABLE[label]
    if w is None:
        return BenchmarkDensity(label, name, Uniform(0.0, 1.0))
    return BenchmarkDensity(label, name, GaussianMixture(tuple(w), tuple(mu), tuple(sd)))


def catalog() -> list[BenchmarkDensity]:
    return [_build(label) for label in MIXTURE_TABLE]


def get_density(label: str) -> BenchmarkDensity:
    label = label.strip().lower().strip("()")
    if label not in MIXTURE_TABLE:
        raise KeyError(f"unknown density {label!r}; choose from {', '.join(MIXTURE_TABLE)}")
    return _build(label)


def pdf(d: BenchmarkDensity, x):
    return d.form.pdf(x)


def dpdf(d: BenchmarkDensity, x):
    if not d.differentiable:
        raise ValueError(f"density ({d.label}) {d.name} is not differentiable")
    return d.form.dpdf(x)


def sample(d: BenchmarkDensity, n: int, seed: int) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    return d.form.sample(int(n), rng)


def catalog_rows():
    """(label, name, weights, means, sds) rows for results metadata."""
    rows = []
    for label, (name, w, mu, sd) in MIXTURE_TABLE.items():
        if w is None:
            rows.append((label, name, "uniform", "0", "1"))
        else:
            fmt = lambda v: ";".join(repr(float(t)) for t in v)
            rows.append((label, name, fmt(w), fmt(mu), fmt(sd)))
    return rows
