import math

import numpy as np
import pytest

from fbst.density import (
    GriddedDensity,
    KDE_EXACT_MAX,
    KdeModel,
    fit_kde,
    interpolate,
    kde_evaluate,
    normalize_grid,
    silverman_bandwidth,
    trapezoid_mass,
)
from fbst.exceptions import DataError, GridError, InvalidParameterError


def test_silverman_two_points():
    # sd path: the IQR of two points is degenerate and falls back to the sd
    assert silverman_bandwidth(np.array([0.0, 1.0])) == pytest.approx(
        0.5540149860052124, rel=1e-14
    )


def test_silverman_matches_formula():
    rng = np.random.default_rng(5)
    x = rng.standard_cauchy(400)
    sd = np.std(x, ddof=1)
    iqr = np.percentile(x, 75, method="inverted_cdf") - np.percentile(
        x, 25, method="inverted_cdf"
    )
    expect = 0.9 * min(sd, iqr / 1.34) * 400 ** (-0.2)
    assert silverman_bandwidth(x) == pytest.approx(expect, rel=1e-12)
    # fat tails make the IQR the smaller spread measure
    assert iqr / 1.34 < sd


def test_silverman_identical_samples():
    with pytest.raises(DataError):
        silverman_bandwidth(np.full(50, 3.3))


def test_silverman_zero_iqr_falls_back_to_sd():
    x = np.concatenate([np.zeros(80), np.array([-4.0, 4.0])])
    sd = np.std(x, ddof=1)
    assert silverman_bandwidth(x) == pytest.approx(0.9 * sd * x.size ** (-0.2), rel=1e-12)


def test_fit_kde_validates():
    with pytest.raises(DataError):
        fit_kde(np.array([1.0]))
    with pytest.raises(InvalidParameterError):
        fit_kde(np.array([0.0, 1.0, 2.0]), bandwidth=-0.5)


def test_kde_matches_direct_sum():
    rng = np.random.default_rng(42)
    samples = rng.normal(0.0, 1.0, 500)
    model = fit_kde(samples)
    grid = np.linspace(-3.0, 3.0, 101)
    h = model.bandwidth
    direct = np.array(
        [np.exp(-0.5 * ((g - samples) / h) ** 2).sum() / (samples.size * h * math.sqrt(2 * math.pi))
         for g in grid]
    )
    assert np.allclose(kde_evaluate(model, grid), direct, rtol=1e-12)


def test_kde_normalization():
    rng = np.random.default_rng(7)
    samples = rng.normal(2.0, 0.7, 4000)
    model = fit_kde(samples)
    grid = np.linspace(samples.min() - 5 * model.bandwidth,
                       samples.max() + 5 * model.bandwidth, 2001)
    mass = trapezoid_mass(grid, kde_evaluate(model, grid))
    assert mass == pytest.approx(1.0, abs=1e-3)


def test_kde_binned_route_agrees_with_exact():
    rng = np.random.default_rng(9)
    samples = rng.normal(0.0, 1.0, KDE_EXACT_MAX + 5000)
    model = fit_kde(samples)
    grid = np.linspace(-2.5, 2.5, 401)
    binned = kde_evaluate(model, grid)  # large n takes the binned path

    small = KdeModel(samples=samples[: KDE_EXACT_MAX], bandwidth=model.bandwidth)
    assert binned.shape == grid.shape
    # compare directly against the exact sum over all samples
    h = model.bandwidth
    exact = np.zeros_like(grid)
    for start in range(0, samples.size, 8192):
        block = samples[start : start + 8192]
        exact += np.exp(-0.5 * ((grid[:, None] - block[None, :]) / h) ** 2).sum(axis=1)
    exact /= samples.size * h * math.sqrt(2 * math.pi)
    scale = exact.max()
    assert np.max(np.abs(binned - exact)) / scale < 1e-3
    assert small.bandwidth == h


def test_normalize_grid_and_gridded_density():
    grid = np.linspace(-4.0, 4.0, 1001)
    raw = np.exp(-0.5 * grid**2)
    dens = normalize_grid(grid, raw)
    assert trapezoid_mass(dens.grid, dens.values) == pytest.approx(1.0, rel=1e-12)
    assert dens.mode == pytest.approx(0.0, abs=1e-12)
    # the truncated tails (2 * Phi(-4) ~ 6e-5) shift the normalization a bit
    assert dens(0.0) == pytest.approx(1.0 / math.sqrt(2 * math.pi), rel=2e-4)
    assert dens(99.0) == 0.0
    assert dens(np.array([-99.0, 0.0])).shape == (2,)


def test_normalize_grid_validates():
    grid = np.linspace(0.0, 1.0, 50)
    with pytest.raises(GridError):
        normalize_grid(grid, -np.ones(50))
    with pytest.raises(GridError):
        normalize_grid(grid, np.zeros(50))
    with pytest.raises(GridError):
        normalize_grid(grid[::-1], np.ones(50))
    with pytest.raises((GridError, DataError)):
        normalize_grid(np.linspace(0, 1, 5), np.ones(5))
    with pytest.raises(GridError):
        normalize_grid(grid, np.ones(49))


def test_interpolate_is_zero_outside():
    dens = GriddedDensity(
        grid=np.array([0.0, 1.0, 2.0]),
        values=np.array([1.0, 3.0, 1.0]),
        normalization=1.0,
    )
    assert interpolate(dens, 0.5) == pytest.approx(2.0)
    assert interpolate(dens, -0.1) == 0.0
    assert interpolate(dens, 2.1) == 0.0
