"""Exact kernel density and density-derivative evaluation in linear time.

For a kernel ``c * poly(|u|) * exp(-|u|)`` every sum
``sum_i |x - x_i|^m exp(-|x - x_i|)`` splits at ``n(x)``, the number of
sample points ``<= x``, into a left and a right part. Expanding
``(x - x_i)^m`` binomially leaves running sums over the order statistics
(``ell`` and ``r`` below) that obey one-step recursions, so a single forward
and a single backward pass serve every query.

Work happens in normalised coordinates ``y = (x - median) / h``: exponent
arguments are then differences of neighbouring points (always <= 0) and the
powers ``y^k`` stay as small as the data allow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _recursions as _rec
from .kernels import PolyExpKernel, derivative_coeffs, derivative_value, kernel_value

__all__ = [
    "AT_SAMPLES",
    "PrecisionError",
    "SortedSample",
    "CoefficientTables",
    "QueryContext",
    "prepare",
    "build_tables",
    "make_queries",
    "poly_exp_sum",
    "kde",
    "kde_deriv",
    "loo_kde_at_samples",
    "naive_direct_sum",
]

# largest tolerated magnitude of max|y|^alpha
POWER_LIMIT = 1e300


class _AtSamples:
    def __repr__(self):
        return "AT_SAMPLES"


#: Pass as ``queries`` to evaluate at the sample points themselves.
AT_SAMPLES = _AtSamples()


class PrecisionError(ArithmeticError):
    """Powers of the normalised data are too large to recombine safely."""


@dataclass(frozen=True)
class SortedSample:
    """Order statistics in working coordinates, ``y = (x - shift) / scale``.

    ``order`` is the permutation that sorted the caller's data, so
    ``values[order]`` are ascending; ``weights`` is all ones for raw data.
    """

    y: np.ndarray
    shift: float
    scale: float
    order: np.ndarray
    weights: np.ndarray

    @property
    def n(self) -> int:
        return self.y.shape[0]

    def to_working(self, x):
        return (np.asarray(x, dtype=float) - self.shift) / self.scale


@dataclass(frozen=True)
class CoefficientTables:
    """``ell[k, j]`` and ``r[k, j]`` for ``k = 0..alpha``, ``j = 0..n``.

    ``anchor`` is ``"origin"`` for sums of ``(-y_i)^k`` / ``y_i^k`` or
    ``"local"`` for the same sums re-expanded about ``y_j`` (see
    :mod:`fastkde._recursions`). ``ops`` counts the recursion steps taken.
    """

    ell: np.ndarray
    r: np.ndarray
    ops: int
    anchor: str = "origin"

    @property
    def alpha(self) -> int:
        return self.ell.shape[0] - 1


@dataclass(frozen=True)
class QueryContext:
    """Queries in working coordinates, sorted, with ``n(q)`` counts.

    ``order`` maps sorted positions back to the caller's ordering.
    """

    q: np.ndarray
    counts: np.ndarray
    order: np.ndarray


def _as_finite_array(x, what="data"):
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError(f"{what} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite values")
    return arr


def _check_h(h):
    h = float(h)
    if not (h > 0.0 and math.isfinite(h)):
        raise ValueError(f"bandwidth must be positive and finite, got {h!r}")
    return h


def prepare(x, h, weights=None, shift=None) -> SortedSample:
    """Sort ``x`` and map it to working coordinates centred at the median."""
    arr = _as_finite_array(x)
    h = _check_h(h)
    order = np.argsort(arr, kind="stable")
    xs = arr[order]
    if shift is None:
        shift = float(np.median(xs))
    if weights is None:
        w = np.ones(xs.shape[0])
    else:
        w = np.asarray(weights, dtype=float).ravel()[order]
    y = (xs - shift) / h
    return SortedSample(y, float(shift), h, order, w)


def _check_powers(values, alpha):
    if alpha == 0 or values.size == 0:
        return
    big = float(np.max(np.abs(values)))
    if big > 1.0 and alpha * math.log10(big) > math.log10(POWER_LIMIT):
        raise PrecisionError(
            f"max |normalised coordinate| = {big:.3g} raised to degree {alpha} "
            "exceeds 1e300; use a lower degree kernel or a larger bandwidth"
        )


def build_tables(s: SortedSample, alpha: int, anchor: str = "origin") -> CoefficientTables:
    """Run the forward and backward recursions to degree ``alpha``.

    The ``"origin"`` layout costs O(alpha) per point but its recombination
    loses roughly ``eps * max|y|^alpha`` relative accuracy. ``"local"`` costs
    O(alpha^2) per point and is what the estimators use.
    """
    alpha = int(alpha)
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if anchor == "origin":
        _check_powers(s.y, alpha)
        ell, r, ops = _rec.build_tables(s.y, s.weights, alpha)
    elif anchor == "local":
        ell, r, ops = _rec.build_local_tables(s.y, s.weights, alpha)
    else:
        raise ValueError(f"unknown anchor {anchor!r}")
    return CoefficientTables(ell, r, int(ops), anchor)


def make_queries(s: SortedSample, queries) -> QueryContext:
    """Map original-unit queries to working coordinates and count ``n(q)``."""
    q = s.to_working(_as_finite_array(queries, "queries"))
    order = np.argsort(q, kind="stable")
    qs = np.ascontiguousarray(q[order])
    counts = _rec.count_leq(s.y, qs)
    return QueryContext(qs, counts, order)


def _unsort(values, order):
    out = np.empty_like(values)
    out[order] = values
    return out


def _binom_matrix(coefs) -> np.ndarray:
    # A[k, p] = coefs[k + p] * C(k + p, k), so that
    # sum_m coefs[m] (x - y)^m = sum_k (-y)^k sum_p A[k, p] x^p
    d = len(coefs)
    A = np.zeros((d, d))
    for k in range(d):
        for p in range(d - k):
            A[k, p] = coefs[k + p] * math.comb(k + p, k)
    return A


def _evaluate(s, tables, coefs, queries, signed):
    A = _binom_matrix(coefs)
    local = tables.anchor == "local"
    if len(coefs) - 1 > tables.alpha:
        raise ValueError("coefficient degree exceeds table degree")
    if queries is AT_SAMPLES:
        vals, ops = _rec.eval_at_samples(s.y, tables.ell, tables.r, A, signed, local)
        return _unsort(vals, s.order), int(ops)
    if not isinstance(queries, QueryContext):
        queries = make_queries(s, queries)
    if not local:
        _check_powers(queries.q, len(coefs) - 1)
    if queries.counts.shape != queries.q.shape or (
        queries.counts.size and (queries.counts.max() > s.n or queries.counts.min() < 0)
    ):
        raise ValueError("query context is inconsistent with the sample")
    vals, ops = _rec.eval_at_queries(
        s.y, s.weights, tables.ell, tables.r, A, queries.q, queries.counts, signed, local
    )
    return _unsort(vals, queries.order), int(ops)


def poly_exp_sum(s: SortedSample, tables: CoefficientTables, m_deg: int,
                 q=AT_SAMPLES, signed: bool = False) -> np.ndarray:
    """``sum_i w_i sgn(x - y_i)^signed |x - y_i|^m exp(-|x - y_i|)`` in working units.

    ``q`` is a :class:`QueryContext`, raw working-unit queries, or
    :data:`AT_SAMPLES`. Results come back in the caller's order. In the
    signed ``m = 0`` sum, points coinciding with the query count as ``+1``.
    """
    if m_deg > tables.alpha:
        raise ValueError(f"degree {m_deg} exceeds table degree {tables.alpha}")
    coefs = np.zeros(m_deg + 1)
    coefs[m_deg] = 1.0
    if q is not AT_SAMPLES and not isinstance(q, QueryContext):
        q = _working_queries(s, q)
    return _evaluate(s, tables, coefs, q, signed)[0]


def _working_queries(s, qw):
    qw = _as_finite_array(qw, "queries")
    order = np.argsort(qw, kind="stable")
    qs = np.ascontiguousarray(qw[order])
    return QueryContext(qs, _rec.count_leq(s.y, qs), order)


def _density(s, kernel, queries, tables=None):
    if tables is None:
        tables = build_tables(s, kernel.alpha, "local")
    vals, ops = _evaluate(s, tables, kernel.coefficients, queries, False)
    return vals / (s.weights.sum() * s.scale), tables.ops + ops


def kde(x, kernel: PolyExpKernel, h, queries=AT_SAMPLES, return_ops=False):
    """Exact density estimate ``1/(n h) sum_i K((q - x_i)/h)``.

    With ``queries=AT_SAMPLES`` the estimate is returned at each data point
    in the order the data were given.
    """
    s = prepare(x, h)
    vals, ops = _density(s, kernel, queries)
    return (vals, ops) if return_ops else vals


def kde_deriv(x, kernel: PolyExpKernel, h, queries=AT_SAMPLES, return_ops=False):
    """Exact first derivative of the density estimate."""
    D = derivative_coeffs(kernel)
    s = prepare(x, h)
    tables = build_tables(s, kernel.alpha, "local")
    coefs = D.c * np.asarray(D.gamma)
    vals, ops = _evaluate(s, tables, coefs, queries, True)
    vals = vals / (s.weights.sum() * s.scale**2)
    return (vals, tables.ops + ops) if return_ops else vals


def loo_kde_at_samples(x, kernel: PolyExpKernel, h) -> np.ndarray:
    """Leave-one-out density ``f_{-i}(x_i)`` for every data point.

    Only each point's own contribution ``K(0)/h`` is removed, so tied
    values still count each other.
    """
    arr = _as_finite_array(x)
    n = arr.size
    if n < 2:
        raise ValueError("leave-one-out needs at least two points")
    full = kde(arr, kernel, h)
    k0 = kernel.c * kernel.beta[0]
    return (n * full - k0 / float(h)) / (n - 1)


def naive_direct_sum(x, kernel: PolyExpKernel, h, queries, deriv_order: int = 0):
    """O(n m) reference: kernel evaluated pairwise, each sum rounded once.

    Terms are accumulated with :func:`math.fsum` (error-free transformations),
    so the only rounding left is in the individual kernel evaluations.
    """
    arr = _as_finite_array(x)
    h = _check_h(h)
    if queries is AT_SAMPLES:
        q = arr
    else:
        q = _as_finite_array(queries, "queries")
    if deriv_order == 0:
        f = lambda u: kernel_value(kernel, u)
        norm = arr.size * h
    elif deriv_order == 1:
        D = derivative_coeffs(kernel)
        f = lambda u: derivative_value(D, u)
        norm = arr.size * h * h
    else:
        raise ValueError("deriv_order must be 0 or 1")
    out = np.empty(q.size)
    for t, qt in enumerate(q):
        terms = np.atleast_1d(f((qt - arr) / h))
        out[t] = math.fsum(terms) / norm
    return out
