"""Estimator-style front ends, following scikit-learn conventions.

Constructors only store parameters; ``fit`` validates inputs and runs the
computation; fitted state lives in trailing-underscore attributes.  Both
classes are thin wrappers over the functions in :mod:`fbst.models`.
"""
from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .distributions import DistributionSpec, cauchy, exponential, normal
from .evalue import Dimensions, NullSpec, ReferenceFunction, ev_against_from_grid
from .exceptions import DataError
from .mcmc import McmcConfig
from .models import (
    DEFAULT_PRIOR_SCALE,
    RegressionData,
    RegressionSpec,
    TTestSpec,
    TwoGroupData,
    coefficient_fbst,
    default_regression_dims,
    fit_regression,
    hpd_from_grid,
    posterior_summary_from_grid,
    prior_predictive,
    savage_dickey_bf01,
    ttest_evalue_pv0,
    ttest_posterior_grid,
    ttest_prior,
    ttest_reference,
)
from .validation import as_float_vector


class BayesianTTest(BaseEstimator):
    """Two-sample test of a standardized effect with a scaled-Cauchy prior.

    Parameters
    ----------
    prior_scale : float, default sqrt(2)/2
        Scale of the Cauchy prior on the effect.
    reference : str or DistributionSpec, default "prior"
        Reference function for the surprise: "prior", "flat", or an explicit
        distribution.
    grid_lower, grid_upper : float
        Effect grid range.
    grid_points : int
        Grid resolution.
    hpd_level : float
        Level of the reported highest-density interval.

    Attributes
    ----------
    data_ : TwoGroupData
    posterior_ : GriddedDensity
        Marginal posterior of the effect on the grid.
    summary_ : dict
        Posterior mean/sd/quantiles plus the data summary.
    hpd_ : tuple of float
    """

    def __init__(
        self,
        prior_scale=DEFAULT_PRIOR_SCALE,
        reference="prior",
        grid_lower=-6.0,
        grid_upper=6.0,
        grid_points=4001,
        hpd_level=0.95,
    ):
        self.prior_scale = prior_scale
        self.reference = reference
        self.grid_lower = grid_lower
        self.grid_upper = grid_upper
        self.grid_points = grid_points
        self.hpd_level = hpd_level

    def _spec(self) -> TTestSpec:
        return TTestSpec(
            prior_scale=self.prior_scale,
            reference=self.reference,
            grid_lower=self.grid_lower,
            grid_upper=self.grid_upper,
            grid_points=self.grid_points,
        )

    def fit(self, x, y):
        """Fit from measurements ``x`` and two-level group labels ``y``."""
        x = as_float_vector(x, "x", min_len=4)
        labels = np.asarray(y)
        if labels.shape != x.shape:
            raise DataError("x and y must have the same length")
        levels = sorted(str(v) for v in set(labels.tolist()))
        if len(levels) != 2:
            raise DataError(f"need exactly two groups, got {levels}")
        str_labels = np.asarray([str(v) for v in labels.tolist()])
        data = TwoGroupData(
            group1=x[str_labels == levels[0]],
            group2=x[str_labels == levels[1]],
            labels=(levels[0], levels[1]),
        )
        return self.fit_data(data)

    def fit_data(self, data: TwoGroupData):
        """Fit from an already-built TwoGroupData."""
        spec = self._spec()
        self.data_ = data
        self.posterior_ = ttest_posterior_grid(data, spec)
        self.hpd_ = hpd_from_grid(self.posterior_, self.hpd_level)
        self.summary_ = {
            "effect": posterior_summary_from_grid(self.posterior_),
            "data": data.summary(),
        }
        return self

    def _check_fitted(self):
        if not hasattr(self, "posterior_"):
            raise NotFittedError("call fit before using this estimator")

    def evalue(self, theta0=0.0, dims: Dimensions | None = None, null: NullSpec | None = None):
        """E-value report for the null effect value (default 0)."""
        self._check_fitted()
        spec = self._spec()
        if null is None:
            null = NullSpec.point_null(theta0)
        if dims is None:
            dims = spec.dims
        report = ev_against_from_grid(self.posterior_, ttest_reference(spec), null, dims)
        if null.kind == "point":
            report = ttest_evalue_pv0(report, self.data_, spec, null.point)
        return report

    def bayes_factor(self, theta0=0.0) -> dict:
        """Savage-Dickey density ratio at ``theta0``."""
        self._check_fitted()
        bf01 = savage_dickey_bf01(self.posterior_, ttest_prior(self._spec()), theta0)
        return {"bf01": bf01, "bf10": math.inf if bf01 == 0.0 else 1.0 / bf01}

    def hpd(self, level=None):
        self._check_fitted()
        if level is None:
            return self.hpd_
        return hpd_from_grid(self.posterior_, level)


class BayesianLinearRegression(BaseEstimator):
    """Gaussian linear regression sampled by adaptive random-walk Metropolis.

    Parameters
    ----------
    seed : int
        Master seed; the fit is deterministic given the seed and config.
    coefficient_prior_scale : float, default 1.0
        Sd of the normal prior on each slope.
    intercept_prior_scale : float, default 10.0
        Sd of the normal prior on the intercept.
    sigma_prior_rate : float, default 1.0
        Rate of the exponential prior on the noise sd.
    iterations, warmup, chains : int
        Sampler budget (per chain; warmup iterations are discarded).
    target_acceptance : float, default 0.44

    Attributes
    ----------
    fit_ : RegressionFit
    draws_ : ParameterDraws
    names_ : list of str
    coef_ : ndarray of posterior slope means
    intercept_ : float
    sigma_ : float
    rhat_, ess_ : dict
    summary_ : dict
    """

    def __init__(
        self,
        seed=0,
        coefficient_prior_scale=1.0,
        intercept_prior_scale=10.0,
        sigma_prior_rate=1.0,
        iterations=2500,
        warmup=1000,
        chains=4,
        target_acceptance=0.44,
    ):
        self.seed = seed
        self.coefficient_prior_scale = coefficient_prior_scale
        self.intercept_prior_scale = intercept_prior_scale
        self.sigma_prior_rate = sigma_prior_rate
        self.iterations = iterations
        self.warmup = warmup
        self.chains = chains
        self.target_acceptance = target_acceptance

    def _spec(self) -> RegressionSpec:
        return RegressionSpec(
            coefficient_prior=normal(0.0, self.coefficient_prior_scale),
            intercept_prior=normal(0.0, self.intercept_prior_scale),
            sigma_prior=exponential(self.sigma_prior_rate),
        )

    def _config(self) -> McmcConfig:
        return McmcConfig(
            seed=self.seed,
            iterations=self.iterations,
            warmup=self.warmup,
            chains=self.chains,
            target_acceptance=self.target_acceptance,
        )

    def fit(self, X, y, feature_names=None):
        """Fit from a numeric predictor matrix (no intercept column) and y."""
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        y = as_float_vector(y, "y", min_len=3)
        if feature_names is None:
            feature_names = [f"x{j + 1}" for j in range(X.shape[1])]
        names = ["intercept"] + list(feature_names)
        design = np.column_stack([np.ones(X.shape[0]), X])
        data = RegressionData(X=design, y=y, names=names)
        return self.fit_data(data)

    def fit_data(self, data: RegressionData):
        self.data_ = data
        self.fit_ = fit_regression(data, self._spec(), self._config())
        self.draws_ = self.fit_.draws
        self.names_ = list(self.draws_.names)
        stacked = self.draws_.stacked()
        means = stacked.mean(axis=0)
        self.intercept_ = float(means[0])
        self.coef_ = means[1 : data.n_coef]
        self.sigma_ = float(means[data.n_coef])
        self.rhat_ = self.fit_.rhat
        self.ess_ = self.fit_.ess
        self.summary_ = self.fit_.summary()
        return self

    def _check_fitted(self):
        if not hasattr(self, "fit_"):
            raise NotFittedError("call fit before using this estimator")

    def predict(self, X):
        """Posterior-mean linear predictor."""
        self._check_fitted()
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if X.shape[1] != self.coef_.size:
            raise DataError(f"expected {self.coef_.size} predictor columns, got {X.shape[1]}")
        return self.intercept_ + X @ self.coef_

    def evalue(
        self,
        coefficient,
        theta0=0.0,
        dims: Dimensions | None = None,
        reference: ReferenceFunction | None = None,
    ):
        """E-value report for one coefficient (by name, or slope index)."""
        self._check_fitted()
        if isinstance(coefficient, (int, np.integer)):
            coefficient = self.names_[1 + int(coefficient)]
        if dims is None:
            dims = default_regression_dims(self.data_)
        return coefficient_fbst(self.fit_, coefficient, reference=reference, dims=dims, theta0=theta0)

    def prior_predictive(self, n_sims, seed):
        self._check_fitted()
        return prior_predictive(self.data_, self._spec(), n_sims, seed)
