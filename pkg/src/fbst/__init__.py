"""Full Bayesian significance testing.

The e-value against a sharp null is the posterior mass of the parameter
points whose surprise (posterior density over a reference function) exceeds
the best surprise attainable on the null set.  This package computes it on
density grids and on posterior draws, recalibrates it through the
chi-square mapping, and ships two ready models (a two-group effect test and
Gaussian linear regression) plus a CLI with JSON reports and SVG plots.
"""
from ._version import __version__
from .density import (
    GriddedDensity,
    KdeModel,
    fit_kde,
    kde_evaluate,
    normalize_grid,
    silverman_bandwidth,
    trapezoid_mass,
)
from .distributions import (
    DistributionSpec,
    cauchy,
    chi2_cdf,
    chi2_pdf,
    chi2_quantile,
    chi_square,
    exponential,
    log_pdf,
    noncentral_t,
    noncentral_t_pdf,
    normal,
    pdf,
    sample,
    student_t,
    uniform,
)
from .estimators import BayesianLinearRegression, BayesianTTest
from .evalue import (
    Dimensions,
    EValueReport,
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
from .exceptions import (
    ConvergenceError,
    DataError,
    FbstError,
    GridError,
    InvalidParameterError,
    ZeroReferenceError,
)
from .mcmc import (
    McmcConfig,
    ParameterDraws,
    effective_sample_size,
    gelman_rubin,
    rw_metropolis,
)
from .models import (
    DEFAULT_PRIOR_SCALE,
    RegressionData,
    RegressionFit,
    RegressionSpec,
    TTestSpec,
    TwoGroupData,
    coefficient_bf01,
    coefficient_fbst,
    default_regression_dims,
    fit_regression,
    fit_ttest,
    hpd_from_grid,
    hpd_from_samples,
    posterior_summary_from_grid,
    posterior_summary_from_samples,
    prior_predictive,
    savage_dickey_bf01,
    simulate_two_groups,
    ttest_posterior_grid,
    ttest_prior,
    ttest_reference,
)

__all__ = [
    "__version__",
    "BayesianLinearRegression",
    "BayesianTTest",
    "ConvergenceError",
    "DEFAULT_PRIOR_SCALE",
    "DataError",
    "Dimensions",
    "DistributionSpec",
    "EValueReport",
    "FbstError",
    "GriddedDensity",
    "GridError",
    "InvalidParameterError",
    "KdeModel",
    "McmcConfig",
    "NullSpec",
    "ParameterDraws",
    "ReferenceFunction",
    "RegressionData",
    "RegressionFit",
    "RegressionSpec",
    "TTestSpec",
    "TwoGroupData",
    "ZeroReferenceError",
    "asymptotic_ev0",
    "asymptotic_pv0",
    "cauchy",
    "chi2_cdf",
    "chi2_pdf",
    "chi2_quantile",
    "chi_square",
    "coefficient_bf01",
    "coefficient_fbst",
    "default_regression_dims",
    "effective_sample_size",
    "ev_against_from_grid",
    "ev_against_from_samples",
    "exponential",
    "fit_kde",
    "fit_regression",
    "fit_ttest",
    "gelman_rubin",
    "hpd_from_grid",
    "hpd_from_samples",
    "kde_evaluate",
    "log_pdf",
    "mode_distance",
    "noncentral_t",
    "noncentral_t_pdf",
    "normal",
    "normalize_grid",
    "pdf",
    "posterior_summary_from_grid",
    "posterior_summary_from_samples",
    "prior_predictive",
    "rw_metropolis",
    "sample",
    "savage_dickey_bf01",
    "silverman_bandwidth",
    "simulate_two_groups",
    "standardized_ev",
    "student_t",
    "sup_null",
    "surprise",
    "trapezoid_mass",
    "ttest_posterior_grid",
    "ttest_prior",
    "ttest_reference",
    "uniform",
]
