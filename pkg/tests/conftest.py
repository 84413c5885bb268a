import math

import numpy as np
import pytest
from scipy import integrate


def quad_sym(f, lim=np.inf):
    """Integral of an even-ish integrand over the real line, split at 0."""
    opts = dict(epsabs=0.0, epsrel=1e-13, limit=500)
    left = integrate.quad(f, -lim, 0.0, **opts)[0]
    right = integrate.quad(f, 0.0, lim, **opts)[0]
    return left + right


def brute_kde(x, kern, h, q):
    """Direct pairwise sum in long double; independent of fastkde's evaluators."""
    x = np.asarray(x, dtype=np.longdouble)
    q = np.asarray(q, dtype=np.longdouble)
    u = np.abs(q[:, None] - x[None, :]) / np.longdouble(h)
    poly = np.zeros_like(u)
    for b in reversed(kern.beta):
        poly = poly * u + np.longdouble(b)
    vals = np.longdouble(kern.c) * np.exp(-u) * poly
    return np.asarray(vals.sum(axis=1) / (len(x) * np.longdouble(h)), dtype=float)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def reference_constants():
    """Epanechnikov and biweight constants, checked against quadrature."""
    epa = lambda x: 0.75 * (1 - x * x)
    bw = lambda x: 15.0 / 16.0 * (1 - x * x) ** 2
    bw1 = lambda x: -15.0 / 4.0 * x * (1 - x * x)
    q = lambda f: integrate.quad(f, -1.0, 1.0, epsabs=0, epsrel=1e-13)[0]
    out = {
        "epa_var": q(lambda x: x * x * epa(x)),
        "epa_R": q(lambda x: epa(x) ** 2),
        "bw_var": q(lambda x: x * x * bw(x)),
        "bw_R1": q(lambda x: bw1(x) ** 2),
        "gauss_R": quad_sym(lambda x: (math.exp(-x * x / 2) / math.sqrt(2 * math.pi)) ** 2),
    }
    return out
