"""Poly-exponential kernels ``c * poly(|x|) * exp(-|x|)`` and their constants.

All moments and roughness functionals reduce to sums of factorials through
``int |x|^k exp(-|x|) dx = 2 k!``, so everything here is closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "MAX_ALPHA",
    "InvalidKernelError",
    "PolyExpKernel",
    "SignedPolyExpDerivative",
    "make_kalpha",
    "make_kernel",
    "normalizer",
    "kernel_value",
    "derivative_coeffs",
    "derivative_value",
    "variance",
    "roughness",
    "deriv_roughness",
    "efficiency",
    "relative_efficiency",
    "EPANECHNIKOV",
    "BIWEIGHT",
    "GAUSSIAN",
]

# Factorials up to (2*MAX_ALPHA + 2)! stay well inside double range.
MAX_ALPHA = 30

_NONNEG_GRID = np.linspace(-50.0, 50.0, 10001)


class InvalidKernelError(ValueError):
    """Coefficients do not define a valid (or differentiable) kernel."""


def _fact(k: int) -> float:
    return float(math.factorial(k))


@dataclass(frozen=True)
class PolyExpKernel:
    """Kernel ``K(x) = c * exp(-|x|) * sum_k beta[k] |x|^k``."""

    alpha: int
    beta: tuple[float, ...]
    c: float

    def __post_init__(self):
        if len(self.beta) != self.alpha + 1:
            raise InvalidKernelError("beta must have alpha + 1 entries")

    @property
    def coefficients(self) -> np.ndarray:
        """Normalised coefficients ``c * beta``."""
        return self.c * np.asarray(self.beta, dtype=float)

    def __call__(self, u):
        return kernel_value(self, u)


@dataclass(frozen=True)
class SignedPolyExpDerivative:
    """``K'(x) = c * sign(x) * exp(-|x|) * sum_k gamma[k] |x|^k``."""

    alpha: int
    gamma: tuple[float, ...]
    c: float

    def __call__(self, u):
        return derivative_value(self, u)


def normalizer(beta: Sequence[float]) -> float:
    """Return ``c`` such that ``c * exp(-|x|) * sum beta_k |x|^k`` integrates to one."""
    total = 2.0 * sum(b * _fact(k) for k, b in enumerate(beta))
    if not total > 0.0 or not math.isfinite(total):
        raise InvalidKernelError(
            f"kernel shape integrates to {total!r}; need a positive finite integral"
        )
    return 1.0 / total


def make_kalpha(alpha: int) -> PolyExpKernel:
    """Canonical kernel with ``beta_k = 1/k!``, smooth to order ``alpha``.

    ``alpha = 0`` gives the Laplace kernel.
    """
    alpha = int(alpha)
    if alpha < 0 or alpha > MAX_ALPHA:
        raise InvalidKernelError(f"alpha must be in [0, {MAX_ALPHA}], got {alpha}")
    beta = tuple(1.0 / _fact(k) for k in range(alpha + 1))
    return PolyExpKernel(alpha, beta, 1.0 / (2.0 * (alpha + 1)))


def make_kernel(beta: Sequence[float], check: bool = True) -> PolyExpKernel:
    """Build a kernel from an arbitrary (un-normalised) coefficient list.

    With ``check`` the kernel is evaluated on a 10 001 point grid over
    ``[-50, 50]`` and rejected if it goes negative anywhere. This is a guard,
    not a proof of nonnegativity.
    """
    beta = tuple(float(b) for b in beta)
    if not beta:
        raise InvalidKernelError("need at least one coefficient")
    alpha = len(beta) - 1
    if alpha > MAX_ALPHA:
        raise InvalidKernelError(f"degree {alpha} exceeds cap {MAX_ALPHA}")
    kern = PolyExpKernel(alpha, beta, normalizer(beta))
    if check and any(b < 0 for b in beta):
        if np.min(kernel_value(kern, _NONNEG_GRID)) < 0.0:
            raise InvalidKernelError("kernel takes negative values")
    return kern


def _poly_abs(coefs, u):
    a = np.abs(np.asarray(u, dtype=float))
    acc = np.zeros_like(a)
    for b in reversed(coefs):
        acc = acc * a + b
    return a, acc


def kernel_value(K: PolyExpKernel, u):
    a, p = _poly_abs(K.beta, u)
    out = K.c * np.exp(-a) * p
    return float(out) if np.ndim(out) == 0 else out


def derivative_coeffs(K: PolyExpKernel) -> SignedPolyExpDerivative:
    """Coefficients of ``K'`` as a signed poly-exp function.

    Differentiating term by term gives ``gamma_k = (k+1) beta_{k+1} - beta_k``.
    ``gamma_0`` must vanish for ``K'`` to exist at zero.
    """
    b = list(K.beta) + [0.0]
    gamma = [(k + 1) * b[k + 1] - b[k] for k in range(K.alpha + 1)]
    scale = max(abs(x) for x in K.beta)
    if abs(gamma[0]) > 1e-14 * scale:
        raise InvalidKernelError(
            "kernel is not differentiable at 0: smoothness requires beta_1 == beta_0"
        )
    gamma[0] = 0.0
    return SignedPolyExpDerivative(K.alpha, tuple(gamma), K.c)


def derivative_value(D: SignedPolyExpDerivative, u):
    u = np.asarray(u, dtype=float)
    a, p = _poly_abs(D.gamma, u)
    out = D.c * np.sign(u) * np.exp(-a) * p
    return float(out) if np.ndim(out) == 0 else out


def variance(K: PolyExpKernel) -> float:
    """Second moment ``int x^2 K(x) dx``."""
    return 2.0 * K.c * sum(b * _fact(k + 2) for k, b in enumerate(K.beta))


def _pair_integral(coefs, shift: int) -> float:
    # int (sum_k a_k |x|^k)^2 |x|^shift exp(-2|x|) dx
    # = sum_kj a_k a_j (k+j+shift)! / 2^(k+j+shift)
    total = 0.0
    for k, ak in enumerate(coefs):
        if ak == 0.0:
            continue
        for j, aj in enumerate(coefs):
            if aj == 0.0:
                continue
            p = k + j + shift
            total += ak * aj * _fact(p) / 2.0**p
    return total


def roughness(K: PolyExpKernel) -> float:
    """``R(K) = int K(x)^2 dx``."""
    return K.c**2 * _pair_integral(K.beta, 0)


def deriv_roughness(K: PolyExpKernel) -> float:
    """``R(K') = int K'(x)^2 dx``."""
    D = derivative_coeffs(K)
    return D.c**2 * _pair_integral(D.gamma, 0)


def kalpha_deriv_roughness(alpha: int) -> float:
    """Closed form of ``R(K_alpha')`` for the canonical family."""
    return _fact(2 * alpha) / _fact(alpha + 1) ** 2 * 2.0 ** (-2 * alpha - 2)


def efficiency(K, deriv_order: int = 0) -> float:
    """Scale-free kernel quality ``(sigma_K^(2k+1) R(K^(k)))^-1``.

    ``K`` may be a :class:`PolyExpKernel` or one of the reference kernels
    (anything exposing ``variance()`` / ``roughness(k)``).
    """
    if deriv_order not in (0, 1):
        raise ValueError("deriv_order must be 0 or 1")
    if isinstance(K, PolyExpKernel):
        s2 = variance(K)
        rough = roughness(K) if deriv_order == 0 else deriv_roughness(K)
    else:
        s2 = K.variance
        rough = K.roughness[deriv_order]
    return 1.0 / (s2 ** (deriv_order + 0.5) * rough)


def relative_efficiency(K, deriv_order: int = 0) -> float:
    """Efficiency relative to Epanechnikov (density) or biweight (derivative)."""
    ref = EPANECHNIKOV if deriv_order == 0 else BIWEIGHT
    return efficiency(K, deriv_order) / efficiency(ref, deriv_order)


@dataclass(frozen=True)
class _ReferenceKernel:
    name: str
    variance: float
    # roughness[k] = R(K^(k)); None where undefined
    roughness: tuple


# 3/4 (1 - x^2) on [-1, 1]
EPANECHNIKOV = _ReferenceKernel("epanechnikov", 1.0 / 5.0, (3.0 / 5.0, None))
# 15/16 (1 - x^2)^2 on [-1, 1]
BIWEIGHT = _ReferenceKernel("biweight", 1.0 / 7.0, (5.0 / 7.0, 15.0 / 7.0))
GAUSSIAN = _ReferenceKernel(
    "gaussian", 1.0, (1.0 / (2.0 * math.sqrt(math.pi)), 1.0 / (4.0 * math.sqrt(math.pi)))
)
