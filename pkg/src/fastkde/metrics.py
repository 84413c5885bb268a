"""Integrated and pointwise error measures, plus a wall-clock timer."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from scipy import integrate

__all__ = ["EvaluationGrid", "ise", "pointwise_mse", "timed"]


@dataclass(frozen=True)
class EvaluationGrid:
    lo: float
    hi: float
    m: int = 10001

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("grid needs lo < hi")
        if self.m < 3 or self.m % 2 == 0:
            raise ValueError("grid size must be odd and >= 3 for Simpson's rule")

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.m)

    @classmethod
    def for_density(cls, density, m=10001, n_sd=5.0):
        lo, hi = density.support(n_sd)
        return cls(lo, hi, m)


def ise(est, truth, grid: EvaluationGrid) -> float:
    """Composite Simpson integral of ``(est - truth)^2`` over the grid.

    ``truth`` is a callable or an array of values on ``grid.points``.
    """
    est = np.asarray(est, dtype=float)
    if est.shape != (grid.m,):
        raise ValueError(f"estimate has {est.size} values, grid has {grid.m}")
    pts = grid.points
    tv = truth(pts) if callable(truth) else np.asarray(truth, dtype=float)
    return float(integrate.simpson((est - tv) ** 2, x=pts))


def pointwise_mse(estimates, truth) -> np.ndarray:
    """Mean over replications (rows) of the squared error at each grid point."""
    try:
        est = np.asarray(estimates, dtype=float)
    except ValueError as exc:
        raise ValueError("replications have different lengths") from exc
    if est.ndim != 2:
        raise ValueError("expected a (replications, points) array")
    if est.shape[0] < 2:
        raise ValueError("need at least two replications")
    tv = np.asarray(truth, dtype=float)
    if tv.shape != est.shape[1:]:
        raise ValueError("truth does not match the estimate grid")
    return np.mean((est - tv) ** 2, axis=0)


def timed(run, *args, **kwargs):
    """Call ``run`` once; return ``(result, seconds)`` from a monotonic clock."""
    t0 = time.perf_counter()
    out = run(*args, **kwargs)
    return out, time.perf_counter() - t0
