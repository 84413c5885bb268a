"""Accuracy, timing and efficiency experiments behind the CLI."""

from __future__ import annotations

import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from .bandwidth import GAUSS_REF, silverman_bandwidth
from .binned import binned_kde, linear_bin
from .densities import get_density
from .exact import AT_SAMPLES, kde, kde_deriv, naive_direct_sum
from .kernels import efficiency, make_kalpha, relative_efficiency
from .metrics import EvaluationGrid, ise, timed

__all__ = [
    "METHODS",
    "ExperimentRecord",
    "parse_method",
    "worker_count",
    "run_method",
    "bench_accuracy",
    "bench_speed",
    "efficiency_table",
]

METHODS = ("exact-K1", "exact-K4", "exact-K7", "binned-K1", "binned-K4", "naive")
DEFAULT_BINS = 1024
# naive rows are skipped above this many kernel evaluations
NAIVE_LIMIT = 10**8


@dataclass
class ExperimentRecord:
    row: str  # "rep" or "mean"
    method: str
    density: str
    n: int
    m: int
    b: int
    k: int
    error: float
    seconds: float
    seed: int

    @classmethod
    def columns(cls):
        return [f.name for f in fields(cls)]

    def as_row(self):
        return asdict(self)


@dataclass(frozen=True)
class MethodSpec:
    label: str
    kind: str  # exact | binned | naive
    alpha: int


def parse_method(label: str) -> MethodSpec:
    if label == "naive":
        return MethodSpec(label, "naive", 1)
    m = re.fullmatch(r"(exact|binned)-K(\d+)", label)
    if not m:
        raise ValueError(f"unknown method {label!r}; expected one of {', '.join(METHODS)}")
    return MethodSpec(label, m.group(1), int(m.group(2)))


def worker_count() -> int:
    env = os.environ.get("FASTKDE_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_method(spec: MethodSpec, x, h, queries, k=0, bins=DEFAULT_BINS):
    """Evaluate one method; ``queries`` may be :data:`AT_SAMPLES`."""
    K = make_kalpha(spec.alpha)
    if spec.kind == "exact":
        return kde(x, K, h, queries) if k == 0 else kde_deriv(x, K, h, queries)
    if spec.kind == "naive":
        return naive_direct_sum(x, K, h, queries, deriv_order=k)
    if k != 0:
        raise ValueError("binned estimation supports density only")
    bs = linear_bin(x, bins)
    q = x if queries is AT_SAMPLES else queries
    return binned_kde(bs, K, h, q)


def _one_replication(spec, density, n, k, seed, grid, bins):
    x = density.sample(n, seed)
    K = make_kalpha(spec.alpha)
    h = silverman_bandwidth(x, K, k)
    pts = grid.points
    est, secs = timed(run_method, spec, x, h, pts, k, bins)
    truth = density.pdf if k == 0 else density.dpdf
    return ExperimentRecord(
        "rep", spec.label, density.label, n, grid.m,
        bins if spec.kind == "binned" else 0, k, ise(est, truth, grid), secs, seed,
    )


def bench_accuracy(density="a", n=1000, reps=30, k=0, methods=("exact-K1", "exact-K4"),
                   seed=0, m=10001, bins=DEFAULT_BINS, workers=None):
    """Per-replication ISE records followed by one mean row per method.

    Replication ``r`` draws its sample with seed ``seed + r``; every method
    sees the same samples. Output order does not depend on ``workers``.
    """
    d = get_density(density)
    if k == 1 and not d.differentiable:
        raise ValueError(f"density ({d.label}) is not differentiable")
    specs = [parse_method(mth) for mth in methods]
    grid = EvaluationGrid.for_density(d, m)
    jobs = [(spec, r) for spec in specs for r in range(reps)]
    workers = workers or worker_count()

    def job(item):
        spec, r = item
        return _one_replication(spec, d, n, k, seed + r, grid, bins)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            records = list(pool.map(job, jobs))
    else:
        records = [job(item) for item in jobs]

    out = list(records)
    for spec in specs:
        mine = [rec for rec in records if rec.method == spec.label]
        out.append(ExperimentRecord(
            "mean", spec.label, d.label, n, grid.m, mine[0].b, k,
            float(np.mean([rec.error for rec in mine])),
            float(np.mean([rec.seconds for rec in mine])), seed,
        ))
    return out


def bench_speed(n_list=(1000, 10000, 100000), m_list=(1000,), methods=("exact-K1", "exact-K4"),
                reps=5, density="d", k=0, seed=0, bins=DEFAULT_BINS):
    """Mean wall time per (method, n, m).

    ``m = 0`` means evaluation at the sample points. Sampling and bandwidth
    selection happen outside the timed region; one untimed warm-up call
    precedes each cell. Runs sequentially so timings do not interfere.
    """
    d = get_density(density)
    specs = [parse_method(mth) for mth in methods]
    out = []
    for n in n_list:
        x = d.sample(n, seed)
        for m in m_list:
            queries = AT_SAMPLES if m == 0 else np.linspace(x.min(), x.max(), m)
            m_eff = n if m == 0 else m
            for spec in specs:
                if spec.kind == "naive" and n * m_eff > NAIVE_LIMIT:
                    continue
                if spec.kind == "binned" and k != 0:
                    continue
                h = silverman_bandwidth(x, make_kalpha(spec.alpha), k)
                run_method(spec, x, h, queries, k, bins)
                secs = [timed(run_method, spec, x, h, queries, k, bins)[1] for _ in range(reps)]
                out.append(ExperimentRecord(
                    "mean", spec.label, d.label, n, m_eff,
                    bins if spec.kind == "binned" else 0, k,
                    0.0, float(np.mean(secs)), seed,
                ))
    return out


def efficiency_table(k=0, alpha_max=15):
    """Rows ``(label, alpha, eff, releff)`` for K_alpha plus a Gaussian row."""
    rows = []
    for alpha in range(1 if k == 1 else 0, alpha_max + 1):
        K = make_kalpha(alpha)
        rows.append((f"K{alpha}", alpha, efficiency(K, k), relative_efficiency(K, k)))
    rows.append(("gaussian", "", efficiency(GAUSS_REF, k), relative_efficiency(GAUSS_REF, k)))
    return rows
