"""Exact linear-time kernel density estimation with poly-exponential kernels."""

__version__ = "0.1.0"

from .bandwidth import GAUSS_REF, normal_deriv_roughness, scale_estimate, silverman_bandwidth
from .binned import BinnedSample, binned_kde, linear_bin
from .exact import (
    AT_SAMPLES,
    PrecisionError,
    build_tables,
    kde,
    kde_deriv,
    loo_kde_at_samples,
    naive_direct_sum,
    poly_exp_sum,
    prepare,
)
from .kernels import (
    InvalidKernelError,
    PolyExpKernel,
    derivative_coeffs,
    deriv_roughness,
    efficiency,
    kernel_value,
    make_kalpha,
    make_kernel,
    normalizer,
    relative_efficiency,
    roughness,
    variance,
)
