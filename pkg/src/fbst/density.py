"""Gridded densities and Gaussian kernel density estimates.

Grids are strictly increasing 1-D arrays with trapezoid-normalized values;
interpolation is linear and zero outside the grid.  KDE always uses the
Gaussian kernel with the Silverman rule unless a bandwidth is supplied.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DataError, GridError, InvalidParameterError
from .validation import as_float_vector, check_positive

#: Above this many samples kde_evaluate switches to the binned approximation.
KDE_EXACT_MAX = 20_000
#: Number of bins used by the binned approximation.
KDE_BINS = 4096

MIN_GRID_POINTS = 16


@dataclass
class GriddedDensity:
    """A density tabulated on a grid, normalized to unit trapezoid mass.

    ``normalization`` is the raw trapezoid mass that was divided out, so the
    unnormalized values can be recovered as ``values * normalization``.
    """

    grid: np.ndarray
    values: np.ndarray
    normalization: float

    def __call__(self, x):
        return interpolate(self, x)

    @property
    def mode(self) -> float:
        return float(self.grid[int(np.argmax(self.values))])


# numpy renamed trapz to trapezoid in 2.0
_trapezoid = getattr(np, "trapezoid", None) or np.trapz


def trapezoid_mass(grid, values) -> float:
    return float(_trapezoid(values, grid))


def normalize_grid(grid, values) -> GriddedDensity:
    """Validate a (grid, values) table and normalize it to unit mass."""
    grid = as_float_vector(grid, "grid", min_len=MIN_GRID_POINTS)
    values = as_float_vector(values, "values", min_len=MIN_GRID_POINTS)
    if grid.shape != values.shape:
        raise GridError(f"grid and values differ in length: {grid.size} vs {values.size}")
    if not np.all(np.diff(grid) > 0.0):
        raise GridError("grid must be strictly increasing")
    if np.any(values < 0.0):
        raise GridError("density values must be nonnegative")
    mass = trapezoid_mass(grid, values)
    if not mass > 0.0:
        raise GridError("density has zero mass on the grid")
    return GriddedDensity(grid=grid, values=values / mass, normalization=mass)


def interpolate(density: GriddedDensity, x):
    """Linear interpolation of a gridded density; zero outside the grid."""
    out = np.interp(x, density.grid, density.values, left=0.0, right=0.0)
    return float(out) if np.ndim(x) == 0 else out


def silverman_bandwidth(samples) -> float:
    """Silverman's rule of thumb for a Gaussian kernel.

    0.9 * min(sd, IQR / 1.34) * n**(-1/5), with the sample standard deviation
    (ddof=1) and the empirical-cdf quartiles.  Falls back to sd when the IQR
    is zero; identical samples are rejected.
    """
    samples = as_float_vector(samples, "samples", min_len=2)
    if np.all(samples == samples[0]):
        raise DataError("samples are all identical; no bandwidth exists")
    sd = float(np.std(samples, ddof=1))
    q25, q75 = np.percentile(samples, [25.0, 75.0], method="inverted_cdf")
    iqr = float(q75 - q25)
    spread = sd if iqr == 0.0 else min(sd, iqr / 1.34)
    return 0.9 * spread * samples.size ** (-0.2)


@dataclass
class KdeModel:
    """Gaussian KDE: samples plus a fixed bandwidth."""

    samples: np.ndarray
    bandwidth: float


def fit_kde(samples, bandwidth=None) -> KdeModel:
    samples = as_float_vector(samples, "samples", min_len=2)
    if bandwidth is None:
        bandwidth = silverman_bandwidth(samples)
    else:
        bandwidth = check_positive(bandwidth, "bandwidth")
    return KdeModel(samples=samples, bandwidth=bandwidth)


def _kde_exact(samples, bandwidth, points, block=512):
    n = samples.size
    norm = 1.0 / (n * bandwidth * math.sqrt(2.0 * math.pi))
    out = np.empty(points.size, dtype=float)
    for start in range(0, points.size, block):
        chunk = points[start : start + block, None]
        z = (chunk - samples[None, :]) / bandwidth
        out[start : start + block] = np.exp(-0.5 * z * z).sum(axis=1) * norm
    return out


def _kde_binned(samples, bandwidth, points):
    # Linear binning keeps the discretization error second order in the bin
    # width; with 4096 bins the relative error stays below ~1e-3 anywhere the
    # density is not vanishingly small.
    lo = samples.min() - 5.0 * bandwidth
    hi = samples.max() + 5.0 * bandwidth
    centers = np.linspace(lo, hi, KDE_BINS)
    step = centers[1] - centers[0]
    pos = (samples - lo) / step
    idx = np.floor(pos).astype(np.int64)
    idx = np.clip(idx, 0, KDE_BINS - 2)
    frac = pos - idx
    weights = np.zeros(KDE_BINS, dtype=float)
    np.add.at(weights, idx, 1.0 - frac)
    np.add.at(weights, idx + 1, frac)
    # Convolve the bin weights with the kernel sampled on the same grid.
    radius = min(KDE_BINS - 1, int(math.ceil(8.0 * bandwidth / step)))
    offsets = np.arange(-radius, radius + 1) * step
    kernel = np.exp(-0.5 * (offsets / bandwidth) ** 2)
    kernel /= samples.size * bandwidth * math.sqrt(2.0 * math.pi)
    dense = np.convolve(weights, kernel, mode="same")
    return np.interp(points, centers, dense, left=0.0, right=0.0)


def kde_evaluate(model: KdeModel, points):
    """Evaluate the KDE at ``points``.

    Uses the exact pairwise sum up to 20 000 samples; above that, samples are
    linearly binned onto 4096 bins and convolved with the sampled kernel.
    The approximation's relative error is below 1e-3 wherever the density is
    non-negligible.
    """
    if not isinstance(model, KdeModel):
        raise InvalidParameterError("model must be a KdeModel")
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    if model.samples.size <= KDE_EXACT_MAX:
        out = _kde_exact(model.samples, model.bandwidth, pts)
    else:
        out = _kde_binned(model.samples, model.bandwidth, pts)
    return float(out[0]) if np.ndim(points) == 0 else out
