"""The two bundled models: a two-sample effect-size t test and Gaussian
linear regression, each exposing a posterior that the e-value machinery can
consume.

The t test parameterizes the standardized effect as
delta = (mean of group 1 - mean of group 2) / sigma, with group means
mu + sigma*delta/2 and mu - sigma*delta/2, a scaled-Cauchy prior on delta,
and the scale prior 1/sigma^2 on (mu, sigma^2) - which is flat in
(mu, log sigma) after the change of variables.  Its marginal posterior for
delta depends on the data only through the pooled t statistic, which gives
the grid route: prior(delta) times the noncentral-t density of t_obs at
noncentrality delta*sqrt(n_eff).

The regression model is y ~ N(X beta, sigma^2) with independent normal
priors on the coefficients and an exponential prior on sigma, sampled on
(beta, log sigma) with the Jacobian included.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.random import PCG64, Generator
from scipy.linalg import solve_triangular

from .density import (
    GriddedDensity,
    _trapezoid,
    fit_kde,
    interpolate,
    kde_evaluate,
    normalize_grid,
)
from .distributions import (
    DistributionSpec,
    cauchy,
    exponential,
    log_pdf,
    noncentral_t_pdf,
    normal,
    pdf,
    sample,
)
from .evalue import (
    Dimensions,
    EValueReport,
    NullSpec,
    ReferenceFunction,
    asymptotic_pv0,
    ev_against_from_samples,
    _mass_above,
)
from .exceptions import ConvergenceError, DataError, GridError, InvalidParameterError
from .mcmc import McmcConfig, ParameterDraws, effective_sample_size, gelman_rubin, rw_metropolis
from .validation import as_float_matrix, as_float_vector, check_positive, check_seed

#: Default scale of the Cauchy effect prior.
DEFAULT_PRIOR_SCALE = math.sqrt(2.0) / 2.0

DEFAULT_TTEST_DIMS = Dimensions(3, 2)

RHAT_LIMIT = 1.05


# ---------------------------------------------------------------------------
# two-group data


@dataclass
class TwoGroupData:
    group1: np.ndarray
    group2: np.ndarray
    labels: tuple = ("group1", "group2")
    true_effect: float | None = None

    def __post_init__(self):
        self.group1 = as_float_vector(self.group1, "group1", min_len=2)
        self.group2 = as_float_vector(self.group2, "group2", min_len=2)
        if np.std(self.group1, ddof=1) == 0.0 or np.std(self.group2, ddof=1) == 0.0:
            raise DataError("each group needs a positive standard deviation")

    @cached_property
    def n1(self) -> int:
        return self.group1.size

    @cached_property
    def n2(self) -> int:
        return self.group2.size

    @cached_property
    def mean1(self) -> float:
        return float(self.group1.mean())

    @cached_property
    def mean2(self) -> float:
        return float(self.group2.mean())

    @cached_property
    def sd1(self) -> float:
        return float(np.std(self.group1, ddof=1))

    @cached_property
    def sd2(self) -> float:
        return float(np.std(self.group2, ddof=1))

    @cached_property
    def dof(self) -> int:
        return self.n1 + self.n2 - 2

    @cached_property
    def n_eff(self) -> float:
        return self.n1 * self.n2 / (self.n1 + self.n2)

    @cached_property
    def pooled_sd(self) -> float:
        ss = (self.n1 - 1) * self.sd1**2 + (self.n2 - 1) * self.sd2**2
        return math.sqrt(ss / self.dof)

    @cached_property
    def t_obs(self) -> float:
        se = self.pooled_sd * math.sqrt(1.0 / self.n1 + 1.0 / self.n2)
        return (self.mean1 - self.mean2) / se

    def summary(self) -> dict:
        out = {
            "labels": list(self.labels),
            "n1": self.n1,
            "n2": self.n2,
            "mean1": self.mean1,
            "mean2": self.mean2,
            "sd1": self.sd1,
            "sd2": self.sd2,
            "t_obs": self.t_obs,
            "dof": self.dof,
            "n_eff": self.n_eff,
        }
        if self.true_effect is not None:
            out["true_effect"] = self.true_effect
        return out


def simulate_two_groups(n1, mu1, sd1, n2, mu2, sd2, seed) -> TwoGroupData:
    """Draw two normal groups; records the standardized true effect
    (mu1 - mu2) / sqrt((sd1^2 + sd2^2) / 2)."""
    if n1 < 2 or n2 < 2:
        raise InvalidParameterError("each group needs at least 2 observations")
    sd1 = check_positive(sd1, "sd1")
    sd2 = check_positive(sd2, "sd2")
    rng = Generator(PCG64(check_seed(seed)))
    g1 = rng.normal(mu1, sd1, n1)
    g2 = rng.normal(mu2, sd2, n2)
    true_effect = (mu1 - mu2) / math.sqrt((sd1**2 + sd2**2) / 2.0)
    return TwoGroupData(group1=g1, group2=g2, true_effect=true_effect)


# ---------------------------------------------------------------------------
# effect-size t test


@dataclass(frozen=True)
class TTestSpec:
    prior_scale: float = DEFAULT_PRIOR_SCALE
    reference: str | DistributionSpec = "prior"  # "prior", "flat", or a spec
    grid_lower: float = -6.0
    grid_upper: float = 6.0
    grid_points: int = 4001
    dims: Dimensions = DEFAULT_TTEST_DIMS

    def __post_init__(self):
        check_positive(self.prior_scale, "prior_scale")
        if self.grid_points < 16:
            raise InvalidParameterError("grid_points must be at least 16")
        if not self.grid_lower < self.grid_upper:
            raise InvalidParameterError("grid_lower must be below grid_upper")
        if isinstance(self.reference, str) and self.reference not in ("prior", "flat"):
            raise InvalidParameterError("reference must be 'prior', 'flat', or a DistributionSpec")


def ttest_prior(spec: TTestSpec) -> DistributionSpec:
    return cauchy(0.0, spec.prior_scale)


def ttest_reference(spec: TTestSpec) -> ReferenceFunction:
    if isinstance(spec.reference, DistributionSpec):
        return ReferenceFunction.from_distribution(spec.reference)
    if spec.reference == "flat":
        return ReferenceFunction.flat()
    return ReferenceFunction.from_distribution(ttest_prior(spec))


def _edge_tail_mass(grid, values) -> float:
    total = 0.0
    span = float(grid[-1] - grid[0])
    for pe, pin, dx in (
        (values[0], values[1], grid[1] - grid[0]),
        (values[-1], values[-2], grid[-1] - grid[-2]),
    ):
        if pe <= 0.0:
            continue
        if pin > pe:
            decay = math.log(pin / pe) / dx
            total += pe / decay
        else:
            # not decaying outward; assume the worst over ten grid spans
            total += pe * 10.0 * span
    return total


def ttest_grid(spec: TTestSpec) -> np.ndarray:
    return np.linspace(spec.grid_lower, spec.grid_upper, spec.grid_points)


def ttest_posterior_grid(data: TwoGroupData, spec: TTestSpec = TTestSpec()) -> GriddedDensity:
    """Marginal posterior of the standardized effect on a grid.

    Values are prior(delta) * noncentral_t_pdf(t_obs; dof, delta*sqrt(n_eff)),
    trapezoid-normalized.  Raises GridError when the grid is too narrow for
    the posterior (estimated edge tail mass above 1e-4) or when the implied
    noncentralities leave the documented domain.
    """
    grid = ttest_grid(spec)
    scale = math.sqrt(data.n_eff)
    max_ncp = max(abs(spec.grid_lower), abs(spec.grid_upper)) * scale
    if max_ncp > 40.0:
        raise GridError(
            f"grid edges need noncentralities up to {max_ncp:.1f}, beyond the supported 40; "
            "narrow the effect grid for this sample size"
        )
    likelihood = noncentral_t_pdf(data.t_obs, data.dof, grid * scale)
    prior_vals = pdf(ttest_prior(spec), grid)
    density = normalize_grid(grid, prior_vals * likelihood)
    tail = _edge_tail_mass(density.grid, density.values)
    if tail > 1e-4:
        raise GridError(
            f"estimated posterior mass {tail:.2e} beyond the grid edges; widen the grid"
        )
    return density


def ttest_log_likelihood_ratio(data: TwoGroupData, spec: TTestSpec, theta0) -> float:
    """log L(theta0) - log max L over the grid; always <= 0."""
    grid = ttest_grid(spec)
    scale = math.sqrt(data.n_eff)
    like = noncentral_t_pdf(data.t_obs, data.dof, grid * scale)
    at_null = noncentral_t_pdf(data.t_obs, data.dof, float(theta0) * scale)
    peak = float(like.max())
    if peak <= 0.0 or at_null <= 0.0:
        raise GridError("likelihood underflow on the grid; narrow the grid")
    return min(math.log(at_null) - math.log(peak), 0.0)


def ttest_joint_log_posterior(params, data: TwoGroupData, spec: TTestSpec = TTestSpec()) -> float:
    """Joint log posterior over (mu, log_sigma, effect), up to a constant."""
    mu = float(params[0])
    log_sigma = float(params[1])
    effect = float(params[2])
    if log_sigma > 300.0 or log_sigma < -300.0:
        return -math.inf
    sigma = math.exp(log_sigma)
    m1 = mu + sigma * effect / 2.0
    m2 = mu - sigma * effect / 2.0
    ss1 = (data.n1 - 1) * data.sd1**2 + data.n1 * (data.mean1 - m1) ** 2
    ss2 = (data.n2 - 1) * data.sd2**2 + data.n2 * (data.mean2 - m2) ** 2
    loglik = -(data.n1 + data.n2) * log_sigma - (ss1 + ss2) / (2.0 * sigma * sigma)
    return loglik + log_pdf(ttest_prior(spec), effect)


TTEST_PARAM_NAMES = ["mu", "log_sigma", "effect"]


def fit_ttest(data: TwoGroupData, spec: TTestSpec, config: McmcConfig) -> ParameterDraws:
    """Sample the joint t-test posterior; the 'effect' column matches the
    grid route's marginal."""
    pooled = data.pooled_sd
    mu_hat = 0.5 * (data.mean1 + data.mean2)
    effect_hat = (data.mean1 - data.mean2) / pooled
    init = np.array([mu_hat, math.log(pooled), effect_hat])
    inits = np.empty((config.chains, 3))
    se_mu = pooled / math.sqrt(data.n1 + data.n2)
    se_eff = 1.0 / math.sqrt(data.n_eff)
    jitter_scale = np.array([4.0 * se_mu, 0.4, 4.0 * se_eff])
    for c in range(config.chains):
        rng = Generator(PCG64(config.seed).jumped(config.chains + c))
        inits[c] = init + jitter_scale * rng.standard_normal(3)
    steps = McmcConfig(
        seed=config.seed,
        iterations=config.iterations,
        warmup=config.warmup,
        chains=config.chains,
        initial_step_sizes=(2.4 * se_mu, 2.4 / math.sqrt(data.n1 + data.n2), 2.4 * se_eff),
        target_acceptance=config.target_acceptance,
    )
    return rw_metropolis(
        lambda p: ttest_joint_log_posterior(p, data, spec),
        inits,
        steps,
        names=TTEST_PARAM_NAMES,
    )


def savage_dickey_bf01(posterior: GriddedDensity, prior: DistributionSpec, theta0) -> float:
    """Density ratio posterior(theta0) / prior(theta0)."""
    theta0 = float(theta0)
    prior_at = pdf(prior, theta0)
    if prior_at <= 0.0:
        raise InvalidParameterError(
            f"prior density is zero at theta0={theta0:g}; the density ratio is undefined"
        )
    return interpolate(posterior, theta0) / prior_at


# ---------------------------------------------------------------------------
# interval summaries


def hpd_from_grid(density: GriddedDensity, level=0.95):
    """Highest-density interval from a gridded (unimodal) density."""
    if not 0.0 < level < 1.0:
        raise InvalidParameterError("level must be in (0, 1)")
    values = density.values
    grid = density.grid
    lo_c, hi_c = 0.0, float(values.max())
    for _ in range(80):
        mid = 0.5 * (lo_c + hi_c)
        if _mass_above(grid, values, values, mid) >= level:
            lo_c = mid
        else:
            hi_c = mid
    cut = lo_c
    member = values > cut
    idx = np.flatnonzero(member)
    if idx.size == 0:
        raise GridError("no grid mass above the HPD threshold")
    first, last = int(idx[0]), int(idx[-1])
    left = grid[first]
    if first > 0:
        t = (cut - values[first - 1]) / (values[first] - values[first - 1])
        left = grid[first - 1] + t * (grid[first] - grid[first - 1])
    right = grid[last]
    if last < grid.size - 1:
        t = (cut - values[last + 1]) / (values[last] - values[last + 1])
        right = grid[last + 1] - t * (grid[last + 1] - grid[last])
    return float(left), float(right)


def hpd_from_samples(samples, level=0.95):
    """Shortest interval containing ``level`` of the sorted samples."""
    if not 0.0 < level < 1.0:
        raise InvalidParameterError("level must be in (0, 1)")
    x = np.sort(as_float_vector(samples, "samples", min_len=4))
    n = x.size
    m = int(math.ceil(level * n))
    if m >= n:
        return float(x[0]), float(x[-1])
    widths = x[m:] - x[: n - m]
    i = int(np.argmin(widths))
    return float(x[i]), float(x[i + m])


def _grid_cdf(density: GriddedDensity):
    dx = np.diff(density.grid)
    cells = 0.5 * (density.values[:-1] + density.values[1:]) * dx
    cdf = np.concatenate([[0.0], np.cumsum(cells)])
    return cdf / cdf[-1]


def posterior_summary_from_grid(density: GriddedDensity, probs=(0.025, 0.25, 0.5, 0.75, 0.975)) -> dict:
    grid, values = density.grid, density.values
    mean = float(_trapezoid(grid * values, grid))
    var = float(_trapezoid((grid - mean) ** 2 * values, grid))
    cdf = _grid_cdf(density)
    qs = np.interp(probs, cdf, grid)
    return {
        "mean": mean,
        "sd": math.sqrt(max(var, 0.0)),
        "mode": density.mode,
        "quantiles": {f"{100 * p:g}%": float(q) for p, q in zip(probs, qs)},
    }


def posterior_summary_from_samples(samples, probs=(0.025, 0.25, 0.5, 0.75, 0.975)) -> dict:
    x = as_float_vector(samples, "samples", min_len=4)
    qs = np.quantile(x, probs)
    return {
        "mean": float(x.mean()),
        "sd": float(np.std(x, ddof=1)),
        "quantiles": {f"{100 * p:g}%": float(q) for p, q in zip(probs, qs)},
    }


# ---------------------------------------------------------------------------
# linear regression


@dataclass
class RegressionData:
    """Design matrix with a leading intercept column, response, and names."""

    X: np.ndarray
    y: np.ndarray
    names: list

    def __post_init__(self):
        self.X = as_float_matrix(self.X, "X")
        y_arr = np.asarray(self.y, dtype=float)
        if y_arr.ndim != 1:
            raise DataError(f"y must be one-dimensional, got shape {y_arr.shape}")
        if y_arr.size and not np.all(np.isfinite(y_arr)):
            raise DataError("y contains non-finite values")
        self.y = y_arr
        if self.X.shape[0] != self.y.shape[0]:
            raise DataError(
                f"X has {self.X.shape[0]} rows but y has {self.y.shape[0]}"
            )
        self.names = list(self.names)
        if len(self.names) != self.X.shape[1]:
            raise DataError("names length must match the number of design columns")
        if self.X.shape[0] and np.linalg.matrix_rank(self.X) < self.X.shape[1]:
            raise DataError("design matrix is rank deficient")

    @property
    def n_coef(self) -> int:
        return self.X.shape[1]

    @property
    def n_predictors(self) -> int:
        return self.X.shape[1] - 1


@dataclass(frozen=True)
class RegressionSpec:
    coefficient_prior: DistributionSpec = normal(0.0, 1.0)
    intercept_prior: DistributionSpec = normal(0.0, 10.0)
    sigma_prior: DistributionSpec = exponential(1.0)
    reference: str | DistributionSpec = "flat"


def regression_log_posterior(params, data: RegressionData, spec: RegressionSpec = RegressionSpec()) -> float:
    """Log posterior over (coefficients..., log_sigma), up to a constant.

    With no rows, only the priors (plus the log-sigma Jacobian) remain.
    """
    params = np.asarray(params, dtype=float)
    if params.size != data.n_coef + 1:
        raise InvalidParameterError(
            f"expected {data.n_coef + 1} parameters, got {params.size}"
        )
    coefs = params[:-1]
    log_sigma = float(params[-1])
    if abs(log_sigma) > 300.0:
        return -math.inf
    sigma = math.exp(log_sigma)
    total = log_pdf(spec.intercept_prior, float(coefs[0]))
    for b in coefs[1:]:
        total += log_pdf(spec.coefficient_prior, float(b))
    total += log_pdf(spec.sigma_prior, sigma) + log_sigma  # Jacobian of sigma = exp(ls)
    if data.X.shape[0]:
        resid = data.y - data.X @ coefs
        n = data.X.shape[0]
        total += -n * log_sigma - float(resid @ resid) / (2.0 * sigma * sigma)
    return total


@dataclass
class RegressionFit:
    draws: ParameterDraws  # columns: coefficient names + "sigma"
    rhat: dict
    ess: dict
    acceptance_rates: np.ndarray
    data: RegressionData
    spec: RegressionSpec
    config: McmcConfig

    def summary(self, level=0.95) -> dict:
        out = {}
        stacked = self.draws.stacked()
        for j, name in enumerate(self.draws.names):
            col = stacked[:, j]
            entry = posterior_summary_from_samples(col)
            entry["hpd"] = hpd_from_samples(col, level)
            entry["rhat"] = self.rhat[name]
            entry["ess"] = self.ess[name]
            out[name] = entry
        return out


def fit_regression(data: RegressionData, spec: RegressionSpec, config: McmcConfig) -> RegressionFit:
    """Sample the regression posterior and gate on convergence.

    Sampling runs componentwise on a QR-decorrelated coefficient basis (the
    raw basis can be nearly collinear, which starves a componentwise walk);
    draws are mapped back exactly, and sigma is returned on its natural
    scale.  Raises ConvergenceError when any split R-hat exceeds 1.05.
    """
    if data.X.shape[0] < data.n_coef + 2:
        raise DataError("too few rows to fit the regression")
    q_mat, r_mat = np.linalg.qr(data.X)
    y = data.y

    def log_target(params):
        gamma = params[:-1]
        log_sigma = float(params[-1])
        if abs(log_sigma) > 300.0:
            return -math.inf
        sigma = math.exp(log_sigma)
        coefs = solve_triangular(r_mat, gamma, lower=False)
        total = log_pdf(spec.intercept_prior, float(coefs[0]))
        for b in coefs[1:]:
            total += log_pdf(spec.coefficient_prior, float(b))
        total += log_pdf(spec.sigma_prior, sigma) + log_sigma
        resid = y - q_mat @ gamma
        total += -y.size * log_sigma - float(resid @ resid) / (2.0 * sigma * sigma)
        return total

    beta_hat, *_ = np.linalg.lstsq(data.X, y, rcond=None)
    gamma_hat = r_mat @ beta_hat
    resid = y - data.X @ beta_hat
    dof = max(y.size - data.n_coef, 1)
    sigma_hat = max(math.sqrt(float(resid @ resid) / dof), 1e-8)
    m = data.n_coef
    inits = np.empty((config.chains, m + 1))
    for c in range(config.chains):
        rng = Generator(PCG64(config.seed).jumped(config.chains + c))
        inits[c, :m] = gamma_hat + 4.0 * sigma_hat * rng.standard_normal(m)
        inits[c, m] = math.log(sigma_hat) + 0.5 * rng.standard_normal()
    step_cfg = McmcConfig(
        seed=config.seed,
        iterations=config.iterations,
        warmup=config.warmup,
        chains=config.chains,
        initial_step_sizes=tuple([2.4 * sigma_hat] * m + [2.4 * math.sqrt(2.0 / y.size)]),
        target_acceptance=config.target_acceptance,
    )
    gamma_draws = rw_metropolis(log_target, inits, step_cfg, names=[f"g{j}" for j in range(m)] + ["log_sigma"])

    names = list(data.names) + ["sigma"]
    chains = []
    for chain in gamma_draws.chains:
        betas = solve_triangular(r_mat, chain[:, :m].T, lower=False).T
        sigmas = np.exp(chain[:, m : m + 1])
        chains.append(np.hstack([betas, sigmas]))
    draws = ParameterDraws(
        names=names,
        chains=chains,
        seed=config.seed,
        acceptance_rates=gamma_draws.acceptance_rates,
        step_sizes_after_warmup=gamma_draws.step_sizes_after_warmup,
        step_sizes_final=gamma_draws.step_sizes_final,
    )
    rhat_values = gelman_rubin(draws)
    ess_values = effective_sample_size(draws)
    rhat = {name: float(v) for name, v in zip(names, rhat_values)}
    ess = {name: float(v) for name, v in zip(names, ess_values)}
    fit = RegressionFit(
        draws=draws,
        rhat=rhat,
        ess=ess,
        acceptance_rates=gamma_draws.acceptance_rates,
        data=data,
        spec=spec,
        config=config,
    )
    worst = max(rhat.values())
    if worst > RHAT_LIMIT:
        raise ConvergenceError(
            f"split R-hat up to {worst:.3f} exceeds {RHAT_LIMIT}; "
            "run longer or check the model",
            diagnostics={"rhat": rhat, "ess": ess, "fit": fit},
        )
    return fit


def regression_reference(spec: RegressionSpec) -> ReferenceFunction:
    if isinstance(spec.reference, DistributionSpec):
        return ReferenceFunction.from_distribution(spec.reference)
    if spec.reference == "flat":
        return ReferenceFunction.flat()
    raise InvalidParameterError("regression reference must be 'flat' or a DistributionSpec")


def default_regression_dims(data: RegressionData) -> Dimensions:
    # all coefficients plus sigma, minus the single pinned coefficient
    p = data.n_predictors
    return Dimensions(p + 2, p + 1)


def coefficient_fbst(
    fit,
    coefficient,
    reference: ReferenceFunction | None = None,
    dims: Dimensions | None = None,
    theta0=0.0,
    bandwidth=None,
) -> EValueReport:
    """E-value report for one regression coefficient from its marginal draws."""
    draws = fit.draws if isinstance(fit, RegressionFit) else fit
    marginal = draws.parameter(coefficient)
    if reference is None:
        reference = ReferenceFunction.flat()
    report = ev_against_from_samples(
        marginal,
        reference,
        NullSpec.point_null(theta0),
        dims=dims,
        bandwidth=bandwidth,
    )
    return report


def regression_log_likelihood_ratio(data: RegressionData, coefficient, theta0=0.0) -> float:
    """Profile log likelihood ratio for pinning one coefficient at theta0.

    Both likelihoods are maximized over the remaining coefficients and sigma
    (ordinary least squares with sigma profiled out), so the ratio is
    -(n/2) log(RSS0 / RSS1) and never positive.
    """
    if coefficient not in data.names:
        raise InvalidParameterError(
            f"unknown coefficient '{coefficient}'; available: {', '.join(data.names)}"
        )
    j = data.names.index(coefficient)
    n = data.X.shape[0]
    if n <= data.n_coef:
        raise DataError("too few rows for a likelihood ratio")
    resid_full = data.y - data.X @ np.linalg.lstsq(data.X, data.y, rcond=None)[0]
    rss_full = max(float(resid_full @ resid_full), np.finfo(float).tiny)
    x_rest = np.delete(data.X, j, axis=1)
    y_adj = data.y - theta0 * data.X[:, j]
    resid = y_adj - x_rest @ np.linalg.lstsq(x_rest, y_adj, rcond=None)[0]
    rss_null = float(resid @ resid)
    return min(-(n / 2.0) * math.log(rss_null / rss_full), 0.0)


def coefficient_bf01(fit: RegressionFit, coefficient, theta0=0.0, bandwidth=None) -> float:
    """Savage-Dickey Bayes factor for one coefficient from its marginal draws.

    The marginal posterior density at ``theta0`` comes from a kernel density
    estimate of the draws, so this is a smooth approximation rather than an
    exact ratio.
    """
    draws = fit.draws.parameter(coefficient)
    prior = (
        fit.spec.intercept_prior
        if coefficient == fit.data.names[0]
        else fit.spec.coefficient_prior
    )
    model = fit_kde(draws, bandwidth)
    post_at_null = float(kde_evaluate(model, np.asarray([theta0]))[0])
    prior_at_null = pdf(prior, theta0)
    if prior_at_null <= 0.0:
        raise InvalidParameterError("prior density is zero at the null value")
    return post_at_null / prior_at_null


def prior_predictive(data: RegressionData, spec: RegressionSpec, n_sims, seed) -> np.ndarray:
    """Simulate responses from the prior: one row per simulated dataset."""
    if n_sims < 1:
        raise InvalidParameterError("n_sims must be positive")
    rng = Generator(PCG64(check_seed(seed)))
    n, m = data.X.shape
    out = np.empty((n_sims, n))
    intercepts = sample(spec.intercept_prior, n_sims, seed + 1)
    sigmas = sample(spec.sigma_prior, n_sims, seed + 2)
    slopes = (
        sample(spec.coefficient_prior, n_sims * (m - 1), seed + 3).reshape(n_sims, m - 1)
        if m > 1
        else np.zeros((n_sims, 0))
    )
    for i in range(n_sims):
        coefs = np.concatenate([[intercepts[i]], slopes[i]])
        out[i] = data.X @ coefs + sigmas[i] * rng.standard_normal(n)
    return out


def ttest_evalue_pv0(report: EValueReport, data: TwoGroupData, spec: TTestSpec, theta0) -> EValueReport:
    """Attach the likelihood-ratio asymptotic p-value to a t-test report."""
    if report.dims is None:
        return report
    lam = ttest_log_likelihood_ratio(data, spec, theta0)
    report.pv0 = asymptotic_pv0(lam, report.dims)
    return report
