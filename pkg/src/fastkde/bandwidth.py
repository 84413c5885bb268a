"""Rule-of-thumb bandwidths from the AMISE optimum with a normal plug-in."""

from __future__ import annotations

import math

import numpy as np

from .kernels import GAUSSIAN, PolyExpKernel, deriv_roughness, roughness, variance

__all__ = [
    "GAUSS_REF",
    "DegenerateSampleError",
    "scale_estimate",
    "normal_deriv_roughness",
    "amise_bandwidth",
    "silverman_bandwidth",
]

#: Gaussian kernel constants, for comparing against the usual 1.06 rule.
GAUSS_REF = GAUSSIAN


class DegenerateSampleError(ValueError):
    """Sample has no spread, so no scale-based bandwidth exists."""


def scale_estimate(x) -> float:
    """Sample standard deviation with divisor ``n - 1``."""
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size < 2:
        raise DegenerateSampleError("need at least two observations")
    sd = float(np.std(arr, ddof=1))
    if not sd > 0.0:
        raise DegenerateSampleError("all observations are equal")
    return sd


def normal_deriv_roughness(r: int, sigma: float) -> float:
    """``int (phi_sigma^(r)(x))^2 dx`` for the N(0, sigma^2) density."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    r = int(r)
    return (
        math.factorial(2 * r)
        / (2.0 ** (2 * r + 1) * math.factorial(r) * math.sqrt(math.pi))
        * sigma ** -(2 * r + 1)
    )


def _kernel_constants(kernel, k):
    if isinstance(kernel, PolyExpKernel):
        rk = roughness(kernel) if k == 0 else deriv_roughness(kernel)
        return variance(kernel), rk
    rk = kernel.roughness[k]
    if rk is None:
        raise ValueError(f"{kernel.name} kernel has no derivative of order {k}")
    return kernel.variance, rk


def amise_bandwidth(n: int, sigma: float, kernel, k: int = 0) -> float:
    """h = ((2k+1) R(K^(k)) / (sigma_K^4 R(phi_sigma^(k+2)) n))^(1/(2k+5))."""
    if k not in (0, 1):
        raise ValueError("derivative order must be 0 or 1")
    s2, rk = _kernel_constants(kernel, k)
    rf = normal_deriv_roughness(k + 2, sigma)
    return ((2 * k + 1) * rk / (s2**2 * rf * n)) ** (1.0 / (2 * k + 5))


def silverman_bandwidth(x, kernel, k: int = 0) -> float:
    """Normal-reference bandwidth for estimating the ``k``-th density derivative."""
    arr = np.asarray(x, dtype=float).ravel()
    return amise_bandwidth(arr.size, scale_estimate(arr), kernel, k)
