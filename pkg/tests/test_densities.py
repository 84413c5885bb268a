import math

import numpy as np
import pytest
from scipy import integrate, stats

from fastkde.densities import (
    MIXTURE_TABLE,
    GaussianMixture,
    catalog,
    catalog_rows,
    dpdf,
    get_density,
    pdf,
    sample,
)

LABELS = list("abcdefgh")


def test_catalog_shape():
    cat = catalog()
    assert [d.label for d in cat] == LABELS
    assert [d.differentiable for d in cat].count(False) == 1
    assert not cat[1].differentiable


def test_pdf_examples():
    cat = catalog()
    assert pdf(cat[0], 0.0) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-15)
    assert pdf(cat[1], 0.5) == 1.0 and pdf(cat[1], 2.0) == 0.0


@pytest.mark.parametrize("label", LABELS)
def test_integrates_to_one(label):
    d = get_density(label)
    lo, hi = d.support(12.0)
    pts = [0.0, 1.0] if label == "b" else list(d.form.means)
    total = integrate.quad(d.pdf, lo, hi, points=pts, epsabs=1e-13, epsrel=1e-13, limit=500)[0]
    assert total == pytest.approx(1.0, abs=1e-8)
    xs = np.linspace(lo, hi, 2001)
    assert np.all(d.pdf(xs) >= 0)


@pytest.mark.parametrize("label", [lab for lab in LABELS if lab != "b"])
def test_dpdf_finite_differences(label):
    d = get_density(label)
    lo, hi = d.support(3.0)
    x = np.linspace(lo, hi, 100)
    step = 1e-6
    fd = (d.pdf(x + step) - d.pdf(x - step)) / (2 * step)
    np.testing.assert_allclose(d.dpdf(x), fd, atol=1e-7 * max(1.0, np.max(np.abs(fd))))


def test_dpdf_uniform_rejected():
    with pytest.raises(ValueError, match="not differentiable"):
        dpdf(get_density("b"), 0.5)


def test_symmetry():
    a, d = get_density("a"), get_density("d")
    x = np.linspace(0, 5, 50)
    np.testing.assert_allclose(a.pdf(x), a.pdf(-x), rtol=1e-15)
    np.testing.assert_allclose(d.pdf(x), d.pdf(-x), rtol=1e-14)
    assert a.dpdf(0.0) == 0.0


def test_deterministic_sampling():
    d = get_density("g")
    np.testing.assert_array_equal(sample(d, 100, 7), sample(d, 100, 7))
    assert not np.array_equal(sample(d, 100, 7), sample(d, 100, 8))


def test_gaussian_moments():
    x = sample(get_density("a"), 10**6, 11)
    assert abs(x.mean()) <= 0.005
    assert abs(x.std(ddof=1) - 1.0) <= 0.005


def test_component_frequencies():
    # well separated components of (d): sign of the draw identifies the component
    x = sample(get_density("d"), 100_000, 5)
    frac = np.mean(x > 0)
    # P(component) = 0.5; misassignment is symmetric so the mean is unchanged
    assert abs(frac - 0.5) <= 3 * math.sqrt(0.25 / x.size)


def test_component_frequencies_claw():
    d = get_density("g")
    rng = np.random.Generator(np.random.PCG64(3))
    n = 200_000
    comp = rng.choice(6, size=n, p=d.form.weights)
    counts = np.bincount(comp, minlength=6) / n
    w = np.asarray(d.form.weights)
    assert np.all(np.abs(counts - w) <= 3 * np.sqrt(w * (1 - w) / n))


@pytest.mark.parametrize("label", LABELS)
def test_ks_against_cdf(label):
    d = get_density(label)
    x = sample(d, 100_000, 1234)
    res = stats.kstest(x, d.cdf)
    assert res.pvalue > 0.001


def test_mixture_validation():
    with pytest.raises(ValueError):
        GaussianMixture((0.5, 0.4), (0.0, 1.0), (1.0, 1.0))
    with pytest.raises(ValueError):
        GaussianMixture((0.5, 0.5), (0.0, 1.0), (1.0, 0.0))
    with pytest.raises(ValueError):
        GaussianMixture((1.0,), (0.0, 1.0), (1.0,))


def test_lookup_and_export():
    assert get_density("(G)").name == "Claw"
    with pytest.raises(KeyError):
        get_density("z")
    rows = catalog_rows()
    assert len(rows) == 8 and rows[0][0] == "a"
    assert set(MIXTURE_TABLE) == set(LABELS)
