import math

import numpy as np
import pytest

from fbst.density import normalize_grid
from fbst.distributions import chi2_cdf, normal, pdf, uniform
from fbst.evalue import (
    Dimensions,
    NullSpec,
    ReferenceFunction,
    asymptotic_ev0,
    asymptotic_pv0,
    ev_against_from_grid,
    ev_against_from_samples,
    mode_distance,
    standardized_ev,
    sup_null,
    surprise,
)
from fbst.exceptions import DataError, InvalidParameterError, ZeroReferenceError


def _normal_grid(mu=0.5, sd=0.2, lo=-1.5, hi=2.5, n=8001):
    grid = np.linspace(lo, hi, n)
    return normalize_grid(grid, pdf(normal(mu, sd), grid))


def test_dimensions_validation():
    d = Dimensions(3, 2)
    assert (d.k, d.h) == (3, 2)
    with pytest.raises(InvalidParameterError):
        Dimensions(2, 2)
    with pytest.raises(InvalidParameterError):
        Dimensions(1, -1)
    with pytest.raises(InvalidParameterError):
        Dimensions(2.0, 1)


def test_null_spec():
    assert NullSpec.point_null(0.0).describe() == "point(0)"
    iv = NullSpec.interval(-0.1, 0.1)
    assert iv.describe() == "interval(-0.1, 0.1)"
    with pytest.raises(InvalidParameterError):
        NullSpec.interval(0.1, 0.1)
    with pytest.raises(InvalidParameterError):
        NullSpec.point_null(math.nan)


def test_reference_function():
    flat = ReferenceFunction.flat()
    assert flat.describe() == "flat"
    assert flat.density(3.7) == 1.0
    assert np.array_equal(flat.density(np.zeros(4)), np.ones(4))
    ref = ReferenceFunction.from_distribution(normal(0.0, 1.0))
    assert "normal" in ref.describe()
    assert ref.density(0.0) == pdf(normal(0.0, 1.0), 0.0)
    with pytest.raises(InvalidParameterError):
        ReferenceFunction("weird")
    with pytest.raises(InvalidParameterError):
        ReferenceFunction.from_distribution("normal(0,1)")


def test_surprise_ratio_and_zero_handling():
    ref = ReferenceFunction.from_distribution(uniform(0.0, 1.0))
    assert surprise(lambda t: 0.6, ref, 0.5) == pytest.approx(0.6)
    # zero posterior over zero reference is defined as zero surprise
    assert surprise(lambda t: 0.0, ref, 2.0) == 0.0
    with pytest.raises(ZeroReferenceError):
        surprise(lambda t: 0.3, ref, 2.0)


def test_sup_null_point_and_interval():
    fn = lambda t: np.exp(-((np.asarray(t) - 1.3) ** 2))
    value, argmax = sup_null(fn, NullSpec.point_null(0.5))
    assert argmax == 0.5 and value == pytest.approx(math.exp(-0.64))
    value, argmax = sup_null(fn, NullSpec.interval(0.0, 2.0))
    assert abs(argmax - 1.3) < 1e-6
    assert value == pytest.approx(1.0, abs=1e-12)
    # maximum pinned at an interval edge
    value, argmax = sup_null(fn, NullSpec.interval(-1.0, 0.4))
    assert abs(argmax - 0.4) < 1e-6


def test_grid_point_null_matches_normal_tail_mass():
    # for a normal posterior and flat reference the strict surprise region
    # {s > s(0)} is the interval |theta - mu| < |0 - mu|, so the e-value
    # against theta0=0 is 2*Phi(2.5) - 1
    dens = _normal_grid()
    report = ev_against_from_grid(
        dens, ReferenceFunction.flat(), NullSpec.point_null(0.0), Dimensions(1, 0)
    )
    assert report.ev_against == pytest.approx(0.9875806693484477, abs=1e-6)
    assert report.ev_against + report.ev_support == 1.0
    assert report.null_surprise == pytest.approx(pdf(normal(0.5, 0.2), 0.0), rel=1e-12)
    assert abs(report.surprise_argmax - 0.5) < 1e-3
    assert report.method == "grid"
    assert report.estimator_sd is None
    # h = 0 standardization is the identity and d0 is the squared mode gap
    assert report.sev_against == report.ev_against
    assert report.d0 == pytest.approx(0.25, rel=1e-9)
    assert report.ev0 == pytest.approx(chi2_cdf(report.d0, 1), rel=1e-12)
    assert any("asymptotic" in note for note in report.notes)


def test_grid_interval_null():
    dens = _normal_grid()
    report = ev_against_from_grid(
        dens, ReferenceFunction.flat(), NullSpec.interval(-0.1, 0.1)
    )
    # the interval edge nearest the mode carries the supremum
    assert report.null_argmax == pytest.approx(0.1, abs=1e-6)
    assert report.ev_against == pytest.approx(math.erf(2.0 / math.sqrt(2.0)), abs=1e-6)
    # an interval that covers the mode leaves nothing strictly above s*
    covering = ev_against_from_grid(
        dens, ReferenceFunction.flat(), NullSpec.interval(0.3, 0.8)
    )
    assert covering.ev_against < 1e-6
    assert abs(covering.null_argmax - 0.5) < 1e-5


def test_grid_null_outside_grid_raises():
    dens = _normal_grid()
    with pytest.raises(InvalidParameterError):
        ev_against_from_grid(dens, ReferenceFunction.flat(), NullSpec.point_null(9.0))


def test_uniform_posterior_ties_give_zero():
    grid = np.linspace(0.0, 1.0, 1001)
    dens = normalize_grid(grid, np.ones_like(grid))
    report = ev_against_from_grid(dens, ReferenceFunction.flat(), NullSpec.point_null(0.5))
    assert report.ev_against == 0.0
    assert report.ev_support == 1.0


def test_reference_zero_under_posterior_mass_raises():
    dens = _normal_grid(lo=-0.5, hi=1.5, n=2001)
    ref = ReferenceFunction.from_distribution(uniform(0.0, 1.0))
    with pytest.raises(ZeroReferenceError):
        ev_against_from_grid(dens, ref, NullSpec.point_null(0.5))


def test_power_of_two_reference_rescaling_is_bitwise_invariant():
    # uniform(0,1) and uniform(-1,1) reference densities differ by exactly 2x
    # on the grid, which rescales the surprise without perturbing the strict
    # membership set, so the e-value must not move by a single bit
    grid = np.linspace(0.05, 0.95, 4001)
    dens = normalize_grid(grid, pdf(normal(0.5, 0.15), grid))
    null = NullSpec.point_null(0.2)
    a = ev_against_from_grid(dens, ReferenceFunction.from_distribution(uniform(0.0, 1.0)), null)
    b = ev_against_from_grid(dens, ReferenceFunction.from_distribution(uniform(-1.0, 1.0)), null)
    assert a.ev_against == b.ev_against
    assert a.null_argmax == b.null_argmax


def test_standardized_ev_fixed_points_and_monotonicity():
    dims = Dimensions(3, 2)
    assert standardized_ev(0.0, dims) == (0.0, 1.0)
    assert standardized_ev(1.0, dims) == (1.0, 0.0)
    assert standardized_ev(0.3, Dimensions(2, 0))[0] == 0.3
    sev, sev_c = standardized_ev(0.57, dims)
    assert sev == pytest.approx(0.9033977808541545, rel=1e-12)
    assert sev_c == pytest.approx(0.0966022191458455, rel=1e-10)
    assert standardized_ev(0.9860688129323187, dims)[0] == pytest.approx(
        0.9988848092826026, rel=1e-12
    )
    values = [standardized_ev(e, dims)[0] for e in np.linspace(0.01, 0.99, 25)]
    assert all(b > a for a, b in zip(values, values[1:]))
    with pytest.raises(InvalidParameterError):
        standardized_ev(1.2, dims)
    with pytest.raises(InvalidParameterError):
        standardized_ev(0.5, (3, 2))


def test_asymptotic_ev0():
    assert asymptotic_ev0(3.26, Dimensions(3, 2)) == pytest.approx(
        0.6467511863332107, rel=1e-12
    )
    assert asymptotic_ev0(0.0, Dimensions(2, 1)) == 0.0
    with pytest.raises(InvalidParameterError):
        asymptotic_ev0(-0.1, Dimensions(2, 1))


def test_mode_distance():
    assert mode_distance(0.5, 0.0) == 0.25
    assert mode_distance([1.0, 2.0], [0.0, 0.0]) == 5.0
    with pytest.raises(InvalidParameterError):
        mode_distance([1.0, 2.0], [0.0])
    with pytest.raises(InvalidParameterError):
        mode_distance(math.inf, 0.0)


def test_asymptotic_pv0():
    dims = Dimensions(3, 2)
    assert asymptotic_pv0(0.0, dims) == pytest.approx(1.0)
    assert asymptotic_pv0(-0.75, dims) == pytest.approx(
        1.0 - 0.7793286380801531, rel=1e-10
    )
    # tiny positive slack from floating point optimizers is tolerated
    assert asymptotic_pv0(5e-13, dims) == pytest.approx(1.0)
    with pytest.raises(InvalidParameterError):
        asymptotic_pv0(0.5, dims)


def test_samples_route():
    rng = np.random.default_rng(42)
    draws = rng.normal(0.5, 0.2, 40_000)
    report = ev_against_from_samples(
        draws, ReferenceFunction.flat(), NullSpec.point_null(0.0), Dimensions(1, 0)
    )
    assert report.method == "samples"
    assert report.ev_against == pytest.approx(0.9875806693484477, abs=0.01)
    assert report.ev_against + report.ev_support == 1.0
    n = draws.size
    assert report.estimator_sd == pytest.approx(
        math.sqrt(report.ev_against * (1.0 - report.ev_against) / n), rel=1e-12
    )
    again = ev_against_from_samples(
        draws, ReferenceFunction.flat(), NullSpec.point_null(0.0), Dimensions(1, 0)
    )
    assert again.ev_against == report.ev_against
    assert again.null_surprise == report.null_surprise


def test_samples_route_guards():
    rng = np.random.default_rng(7)
    with pytest.raises(DataError):
        ev_against_from_samples(
            rng.normal(size=999), ReferenceFunction.flat(), NullSpec.point_null(0.0)
        )
    with pytest.warns(RuntimeWarning):
        ev_against_from_samples(
            rng.normal(size=2000), ReferenceFunction.flat(), NullSpec.point_null(0.0)
        )


def test_report_to_dict():
    dens = _normal_grid(n=2001)
    report = ev_against_from_grid(
        dens, ReferenceFunction.flat(), NullSpec.point_null(0.0), Dimensions(3, 2)
    )
    out = report.to_dict()
    assert out["ev_against"] == report.ev_against
    assert out["dims"] == {"k": 3, "h": 2}
    assert out["method"] == "grid"
    assert set(out) >= {
        "ev_against", "ev_support", "sev_against", "sev_support",
        "ev0", "pv0", "d0", "null_surprise", "null_argmax",
        "surprise_argmax", "dims", "method", "reference", "null",
        "estimator_sd", "notes",
    }
