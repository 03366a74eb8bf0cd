"""Command-line front end.

Subcommands: ``ttest`` (two-group effect test), ``regress`` (linear
regression), ``simulate`` (synthetic two-group data), and ``evalue``
(raw-draws mode).  Every run can write a JSON report that embeds the full
resolved configuration; ``fbst --verify report.json`` re-runs that
configuration and fails unless every number matches exactly.

Exit codes: 0 success, 1 validation or data error, 2 convergence failure.
"""
from __future__ import annotations

import argparse
import io
import math
import re
import sys

import numpy as np

from ._version import __version__
from .density import fit_kde, kde_evaluate
from .distributions import cauchy, exponential, normal, pdf, student_t, uniform
from .evalue import (
    Dimensions,
    NullSpec,
    ReferenceFunction,
    asymptotic_pv0,
    ev_against_from_grid,
    ev_against_from_samples,
    surprise,
)
from .exceptions import ConvergenceError, DataError, FbstError, InvalidParameterError
from .ingest import (
    ingest_regression,
    ingest_two_groups,
    read_draws_csv,
    write_draws_csv,
    write_two_groups_csv,
)
from .mcmc import McmcConfig, effective_sample_size, gelman_rubin
from .models import (
    DEFAULT_PRIOR_SCALE,
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
    regression_log_likelihood_ratio,
    savage_dickey_bf01,
    simulate_two_groups,
    ttest_evalue_pv0,
    ttest_posterior_grid,
)
from .plot import write_surprise_plot
from .report import build_report, diff_reports, load_report, write_report


class _UsageError(FbstError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags, which this tool reserves
    # for convergence failures; route usage problems through exit code 1.
    def error(self, message):
        raise _UsageError(message)


_REFERENCE_FAMILIES = {
    "normal": normal,
    "cauchy": cauchy,
    "student_t": student_t,
    "uniform": uniform,
    "exponential": exponential,
}


def _parse_reference(text: str, prior=None) -> ReferenceFunction:
    t = text.strip()
    if t == "flat":
        return ReferenceFunction.flat()
    if t == "prior":
        if prior is None:
            raise InvalidParameterError(
                "reference 'prior' is only available where a model prior exists"
            )
        return ReferenceFunction.from_distribution(prior)
    m = re.fullmatch(r"([a-z_]+)\(([^)]*)\)", t)
    if m is None:
        raise InvalidParameterError(
            f"cannot parse reference {text!r}; use flat, prior, or family(args) "
            f"with family in {sorted(_REFERENCE_FAMILIES)}"
        )
    family, argtext = m.group(1), m.group(2)
    if family not in _REFERENCE_FAMILIES:
        raise InvalidParameterError(
            f"unknown reference family {family!r}; choose from {sorted(_REFERENCE_FAMILIES)}"
        )
    try:
        args = [float(a) for a in argtext.split(",")] if argtext.strip() else []
    except ValueError:
        raise InvalidParameterError(f"non-numeric reference arguments in {text!r}") from None
    try:
        spec = _REFERENCE_FAMILIES[family](*args)
    except TypeError:
        raise InvalidParameterError(f"wrong number of arguments for {family}") from None
    return ReferenceFunction.from_distribution(spec)


def _parse_pair(text, conv, flag):
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2:
        raise InvalidParameterError(f"{flag} takes one value or two comma-separated values")
    try:
        return conv(parts[0]), conv(parts[1])
    except ValueError:
        raise InvalidParameterError(f"cannot parse {flag} value {text!r}") from None


def _parse_dims(text) -> Dimensions:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise InvalidParameterError("--dims expects two integers like 3,2")
    try:
        return Dimensions(int(parts[0]), int(parts[1]))
    except ValueError:
        raise InvalidParameterError(f"cannot parse --dims value {text!r}") from None


def _data_source(config):
    if config.get("data_inline") is not None:
        return io.StringIO(config["data_inline"])
    if config.get("data"):
        return config["data"]
    raise DataError("no input given; use --data PATH or --stdin")


def _null_from_config(config) -> NullSpec:
    interval = config.get("null_interval")
    if interval is not None:
        return NullSpec.interval(float(interval[0]), float(interval[1]))
    return NullSpec.point_null(float(config["theta0"]))


def _dims_from_config(config):
    return None if config.get("dims") is None else Dimensions(*config["dims"])


def _hpd_dict(interval, level):
    return {"level": level, "lower": float(interval[0]), "upper": float(interval[1])}


def _bf_dict(bf01: float):
    return {"bf01": bf01, "bf10": math.inf if bf01 == 0.0 else 1.0 / bf01}


def _sample_surprise_curve(draws, reference, bandwidth):
    model = fit_kde(draws, bandwidth)
    h = model.bandwidth
    grid = np.linspace(draws.min() - 4.0 * h, draws.max() + 4.0 * h, 513)
    dens = kde_evaluate(model, grid)
    return grid, surprise(dens, reference, grid)


def _write_plot(config, grid, svals, report, xlabel):
    write_surprise_plot(
        config["plot"],
        grid,
        svals,
        threshold=report.null_surprise,
        mass_above=report.ev_against,
        mass_below=report.ev_support,
        marker=report.null_argmax,
        title=f"surprise function, reference {report.reference}",
        xlabel=xlabel,
    )


# ---------------------------------------------------------------------------
# runners: config dict in, results dict out


def run_ttest(config: dict, write_outputs: bool = True) -> dict:
    data, info = ingest_two_groups(
        _data_source(config),
        group_col=config["group_col"],
        value_col=config["value_col"],
        groups=config.get("groups"),
    )
    prior = cauchy(0.0, config["prior_scale"])
    reference = _parse_reference(config["reference"], prior=prior)
    spec = TTestSpec(
        prior_scale=config["prior_scale"],
        reference=config["reference"] if config["reference"] in ("prior", "flat")
        else reference.spec,
        grid_lower=config["grid_lower"],
        grid_upper=config["grid_upper"],
        grid_points=config["grid_points"],
    )
    null = _null_from_config(config)
    dims = _dims_from_config(config)

    results = {
        "data": {**data.summary(), "dropped_lines": info["dropped_lines"]},
        "method": config["method"],
    }

    if config["method"] == "grid":
        posterior = ttest_posterior_grid(data, spec)
        report = ev_against_from_grid(posterior, reference, null, dims)
        if null.kind == "point":
            report = ttest_evalue_pv0(report, data, spec, null.point)
            results["bayes_factor"] = _bf_dict(savage_dickey_bf01(posterior, prior, null.point))
        results["effect_posterior"] = posterior_summary_from_grid(posterior)
        results["hpd"] = _hpd_dict(hpd_from_grid(posterior, config["hpd_level"]), config["hpd_level"])
        plot_grid = posterior.grid
        plot_svals = surprise(posterior.values, reference, posterior.grid)
    else:
        mconfig = McmcConfig(
            seed=config["seed"],
            iterations=config["iterations"],
            warmup=config["warmup"],
            chains=config["chains"],
        )
        draws = fit_ttest(data, spec, mconfig)
        effect = draws.parameter("effect")
        report = ev_against_from_samples(
            effect, reference, null, dims=dims, bandwidth=config.get("bandwidth")
        )
        if null.kind == "point":
            report = ttest_evalue_pv0(report, data, spec, null.point)
            model = fit_kde(effect, config.get("bandwidth"))
            post_at_null = float(kde_evaluate(model, np.asarray([null.point]))[0])
            results["bayes_factor"] = _bf_dict(post_at_null / pdf(prior, null.point))
        results["effect_posterior"] = posterior_summary_from_samples(effect)
        results["hpd"] = _hpd_dict(hpd_from_samples(effect, config["hpd_level"]), config["hpd_level"])
        results["diagnostics"] = {
            "rhat": {n: gelman_rubin(draws.per_chain(n)) for n in draws.names},
            "ess": {n: effective_sample_size(draws.per_chain(n)) for n in draws.names},
            "acceptance_rates": np.asarray(draws.acceptance_rates).tolist(),
        }
        if write_outputs and config.get("draws"):
            write_draws_csv(config["draws"], draws)
        plot_grid, plot_svals = _sample_surprise_curve(effect, reference, config.get("bandwidth"))

    results["evalue"] = report.to_dict()
    if write_outputs and config.get("plot"):
        _write_plot(config, plot_grid, plot_svals, report, "standardized effect")
    return results


def run_regress(config: dict, write_outputs: bool = True) -> dict:
    data, info = ingest_regression(_data_source(config), config["formula"])
    spec = RegressionSpec(
        coefficient_prior=normal(0.0, config["coef_scale"]),
        intercept_prior=normal(0.0, config["intercept_scale"]),
        sigma_prior=exponential(config["sigma_rate"]),
        reference=config["reference"],
    )
    mconfig = McmcConfig(
        seed=config["seed"],
        iterations=config["iterations"],
        warmup=config["warmup"],
        chains=config["chains"],
    )
    fit = fit_regression(data, spec, mconfig)

    reference = _parse_reference(config["reference"])
    dims = _dims_from_config(config) or default_regression_dims(data)
    theta0 = float(config["theta0"])
    evalues = {}
    bayes_factors = {}
    for name in data.names[1:]:
        rep = coefficient_fbst(
            fit, name, reference=reference, dims=dims,
            theta0=theta0, bandwidth=config.get("bandwidth"),
        )
        rep.pv0 = asymptotic_pv0(
            regression_log_likelihood_ratio(data, name, theta0), dims
        )
        evalues[name] = rep.to_dict()
        bayes_factors[name] = _bf_dict(coefficient_bf01(fit, name, theta0, config.get("bandwidth")))

    results = {
        "data": {
            "n_rows": info["n_rows"],
            "n_used": info["n_used"],
            "dropped_lines": info["dropped_lines"],
            "names": list(data.names),
            "encodings": info["encodings"],
        },
        "parameters": fit.summary(config["hpd_level"]),
        "diagnostics": {
            "rhat": fit.rhat,
            "ess": fit.ess,
            "acceptance_rates": np.asarray(fit.acceptance_rates).tolist(),
        },
        "evalues": evalues,
        "bayes_factors": bayes_factors,
    }

    if write_outputs and config.get("draws"):
        write_draws_csv(config["draws"], fit.draws)
    if write_outputs and config.get("plot"):
        name = config.get("plot_coef") or data.names[1]
        if name not in fit.draws.names:
            raise InvalidParameterError(
                f"unknown --plot-coef {name!r}; available: {', '.join(fit.draws.names)}"
            )
        rep = coefficient_fbst(
            fit, name, reference=reference, dims=dims,
            theta0=theta0, bandwidth=config.get("bandwidth"),
        )
        grid, svals = _sample_surprise_curve(
            fit.draws.parameter(name), reference, config.get("bandwidth")
        )
        _write_plot(config, grid, svals, rep, name)
    return results


def run_simulate(config: dict, write_outputs: bool = True) -> dict:
    if config["kind"] != "two-groups":
        raise InvalidParameterError(f"unknown simulation kind {config['kind']!r}")
    n1, n2 = config["n"]
    mu1, mu2 = config["mu"]
    sd1, sd2 = config["sd"]
    data = simulate_two_groups(n1, mu1, sd1, n2, mu2, sd2, config["seed"])
    labels = tuple(config["labels"])
    if labels != data.labels:
        data = TwoGroupData(
            group1=data.group1, group2=data.group2,
            labels=labels, true_effect=data.true_effect,
        )
    if write_outputs:
        target = config.get("out") or sys.stdout
        write_two_groups_csv(target, data, extra_meta={"seed": config["seed"]})
    return {"data": data.summary()}


def run_evalue(config: dict, write_outputs: bool = True) -> dict:
    draws = read_draws_csv(_data_source(config), config.get("column"))
    reference = _parse_reference(config["reference"])
    null = _null_from_config(config)
    dims = _dims_from_config(config)
    report = ev_against_from_samples(
        draws, reference, null, dims=dims, bandwidth=config.get("bandwidth")
    )
    if write_outputs and config.get("plot"):
        grid, svals = _sample_surprise_curve(draws, reference, config.get("bandwidth"))
        _write_plot(config, grid, svals, report, config.get("column") or "parameter")
    return {"n_draws": int(draws.size), "evalue": report.to_dict()}


_RUNNERS = {
    "ttest": run_ttest,
    "regress": run_regress,
    "simulate": run_simulate,
    "evalue": run_evalue,
}


# ---------------------------------------------------------------------------
# printing


def _fmt(value, digits):
    if value is None:
        return "-"
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return f"{value:.{digits}g}"


def _print_evalue(ev: dict, digits, out):
    print(f"  ev against null  = {_fmt(ev['ev_against'], digits)}", file=out)
    print(f"  ev in support    = {_fmt(ev['ev_support'], digits)}", file=out)
    if ev.get("sev_against") is not None:
        print(f"  standardized ev  = {_fmt(ev['sev_against'], digits)}", file=out)
    if ev.get("ev0") is not None:
        print(f"  asymptotic ev0   = {_fmt(ev['ev0'], digits)}", file=out)
    if ev.get("pv0") is not None:
        print(f"  asymptotic pv0   = {_fmt(ev['pv0'], digits)}", file=out)
    if ev.get("estimator_sd") is not None:
        print(f"  estimator sd     = {_fmt(ev['estimator_sd'], digits)}", file=out)
    print(f"  null surprise    = {_fmt(ev['null_surprise'], digits)}"
          f"  ({ev['null']}, reference {ev['reference']})", file=out)


def _print_ttest(results: dict, digits, out=None):
    out = out or sys.stdout
    d = results["data"]
    print(f"two-group test ({results['method']} method)", file=out)
    print(f"  {d['labels'][0]}: n={d['n1']} mean={_fmt(d['mean1'], digits)} sd={_fmt(d['sd1'], digits)}",
          file=out)
    print(f"  {d['labels'][1]}: n={d['n2']} mean={_fmt(d['mean2'], digits)} sd={_fmt(d['sd2'], digits)}",
          file=out)
    print(f"  t = {_fmt(d['t_obs'], digits)} on {_fmt(d['dof'], digits)} degrees of freedom", file=out)
    if "true_effect" in d:
        print(f"  true effect (simulated) = {_fmt(d['true_effect'], digits)}", file=out)
    p = results["effect_posterior"]
    print(f"effect posterior: mean={_fmt(p['mean'], digits)} sd={_fmt(p['sd'], digits)}", file=out)
    h = results["hpd"]
    print(f"  {100 * h['level']:g}% HPD [{_fmt(h['lower'], digits)}, {_fmt(h['upper'], digits)}]",
          file=out)
    _print_evalue(results["evalue"], digits, out)
    if results.get("bayes_factor"):
        bf = results["bayes_factor"]
        print(f"  BF01 = {_fmt(bf['bf01'], digits)}  BF10 = {_fmt(bf['bf10'], digits)}", file=out)


def _print_regress(results: dict, digits, out=None):
    out = out or sys.stdout
    d = results["data"]
    print(f"linear regression: {d['n_used']} rows used of {d['n_rows']}", file=out)
    width = max(len(n) for n in results["parameters"]) + 2
    header = f"{'parameter':<{width}}{'mean':>12}{'sd':>12}{'2.5%':>12}{'97.5%':>12}{'rhat':>9}{'ess':>9}"
    print(header, file=out)
    for name, entry in results["parameters"].items():
        q = entry["quantiles"]
        print(
            f"{name:<{width}}{_fmt(entry['mean'], digits):>12}{_fmt(entry['sd'], digits):>12}"
            f"{_fmt(q['2.5%'], digits):>12}{_fmt(q['97.5%'], digits):>12}"
            f"{entry['rhat']:>9.3f}{entry['ess']:>9.0f}",
            file=out,
        )
    print("e-values (null: coefficient = 0 unless overridden)", file=out)
    for name, ev in results["evalues"].items():
        bf = results["bayes_factors"][name]["bf01"]
        print(
            f"  {name:<{width}}ev={_fmt(ev['ev_against'], digits)}"
            f"  sev={_fmt(ev.get('sev_against'), digits)}"
            f"  ev0={_fmt(ev.get('ev0'), digits)}"
            f"  pv0={_fmt(ev.get('pv0'), digits)}"
            f"  BF01={_fmt(bf, digits)}",
            file=out,
        )


def _print_results(subcommand, results, digits):
    if subcommand == "ttest":
        _print_ttest(results, digits)
    elif subcommand == "regress":
        _print_regress(results, digits)
    elif subcommand == "evalue":
        print(f"e-value from {results['n_draws']} draws", file=sys.stdout)
        _print_evalue(results["evalue"], digits, sys.stdout)
    elif subcommand == "simulate":
        d = results["data"]
        print(
            f"simulated {d['n1']}+{d['n2']} observations, "
            f"true effect {_fmt(d.get('true_effect'), digits)}",
            file=sys.stderr,
        )


# ---------------------------------------------------------------------------
# argument parsing


def _add_io_flags(p, plot=True, draws=False):
    p.add_argument("--report", metavar="PATH", help="write a JSON report")
    if plot:
        p.add_argument("--plot", metavar="PATH", help="write a surprise-function SVG")
    if draws:
        p.add_argument("--draws", metavar="PATH", help="write post-warmup draws as CSV")
    p.add_argument("--digits", type=int, default=6,
                   help="significant digits for printed output (default 6); "
                        "reports always carry full precision")


def _add_input_flags(p):
    p.add_argument("--data", metavar="PATH", help="input CSV file")
    p.add_argument("--stdin", action="store_true", help="read the input CSV from stdin")


def _add_null_flags(p, default_dims):
    p.add_argument("--theta0", type=float, default=0.0, help="point null value (default 0)")
    p.add_argument("--null-interval", metavar="LO,HI",
                   help="interval null instead of a point null")
    p.add_argument("--dims", metavar="K,H", default=default_dims,
                   help="parameter-space and null dimensions for sev/ev0"
                        + (f" (default {default_dims})" if default_dims else ""))


def _add_mcmc_flags(p):
    p.add_argument("--iterations", type=int, default=2500,
                   help="iterations per chain including warmup (default 2500)")
    p.add_argument("--warmup", type=int, default=1000,
                   help="warmup iterations discarded per chain (default 1000)")
    p.add_argument("--chains", type=int, default=4, help="number of chains (default 4)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="fbst",
        description="Full Bayesian significance testing from the command line.",
        epilog="The environment variable FBST_THREADS caps how many chains run "
               "concurrently (default: one task per chain).  Option values that "
               "begin with a minus sign need the --flag=value form, e.g. "
               "--null-interval=-0.1,0.1 or --mu=-1,0.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verify", metavar="REPORT",
                        help="re-run the configuration stored in REPORT and "
                             "compare all numbers exactly")
    sub = parser.add_subparsers(dest="subcommand")

    t = sub.add_parser("ttest", help="two-group standardized-effect test",
                       description="Bayesian two-sample test of the standardized "
                                   "mean difference with a scaled-Cauchy prior.")
    _add_input_flags(t)
    t.add_argument("--group-col", default="group", help="group label column (default 'group')")
    t.add_argument("--value-col", default="value", help="measurement column (default 'value')")
    t.add_argument("--groups", metavar="A,B", help="which label is group 1 and which group 2")
    t.add_argument("--prior-scale", type=float, default=DEFAULT_PRIOR_SCALE,
                   help="Cauchy prior scale on the effect (default sqrt(2)/2)")
    t.add_argument("--reference", default="prior",
                   help="surprise reference: prior, flat, or family(args) (default prior)")
    t.add_argument("--grid-lower", type=float, default=-6.0)
    t.add_argument("--grid-upper", type=float, default=6.0)
    t.add_argument("--grid-points", type=int, default=4001)
    _add_null_flags(t, "3,2")
    t.add_argument("--method", choices=["grid", "mcmc"], default="grid",
                   help="marginal grid quadrature (default) or joint MCMC")
    _add_mcmc_flags(t)
    t.add_argument("--bandwidth", type=float, help="KDE bandwidth for the mcmc method")
    t.add_argument("--hpd-level", type=float, default=0.95)
    t.add_argument("--seed", type=int, required=True, help="random seed (recorded in reports)")
    _add_io_flags(t, draws=True)

    r = sub.add_parser("regress", help="Bayesian linear regression",
                       description="Gaussian linear regression with normal priors on "
                                   "coefficients and an exponential prior on sigma.")
    _add_input_flags(r)
    r.add_argument("--formula", required=True, metavar="'Y ~ A + B'",
                   help="response and predictors; categorical columns are dummy coded")
    r.add_argument("--coef-scale", type=float, default=1.0,
                   help="sd of the normal prior on slopes (default 1)")
    r.add_argument("--intercept-scale", type=float, default=10.0,
                   help="sd of the normal prior on the intercept (default 10)")
    r.add_argument("--sigma-rate", type=float, default=1.0,
                   help="rate of the exponential prior on sigma (default 1)")
    r.add_argument("--reference", default="flat",
                   help="surprise reference for coefficient e-values (default flat)")
    _add_null_flags(r, None)
    _add_mcmc_flags(r)
    r.add_argument("--bandwidth", type=float, help="KDE bandwidth for e-values")
    r.add_argument("--hpd-level", type=float, default=0.95)
    r.add_argument("--seed", type=int, required=True, help="random seed (recorded in reports)")
    r.add_argument("--plot-coef", metavar="NAME",
                   help="coefficient to plot (default: first predictor)")
    _add_io_flags(r, draws=True)

    s = sub.add_parser("simulate", help="generate synthetic data",
                       description="Write a synthetic dataset as CSV (stdout by default) "
                                   "with the generating truth recorded in a comment.")
    s.add_argument("kind", choices=["two-groups"], help="what to simulate")
    s.add_argument("--n", required=True, metavar="N1,N2", help="group sizes (one value or two)")
    s.add_argument("--mu", required=True, metavar="M1,M2", help="group means")
    s.add_argument("--sd", required=True, metavar="S1,S2", help="group standard deviations")
    s.add_argument("--labels", default="group1,group2", metavar="A,B", help="group labels")
    s.add_argument("--seed", type=int, required=True, help="random seed")
    s.add_argument("--out", metavar="PATH", help="output CSV path (default stdout)")
    _add_io_flags(s, plot=False)

    e = sub.add_parser("evalue", help="e-value from a CSV of posterior draws",
                       description="Compute the e-value for a null about one parameter "
                                   "directly from posterior draws.")
    _add_input_flags(e)
    e.add_argument("--column", help="draws column (required unless the file has exactly one)")
    e.add_argument("--reference", default="flat",
                   help="surprise reference: flat or family(args) (default flat)")
    _add_null_flags(e, None)
    e.add_argument("--bandwidth", type=float, help="KDE bandwidth override")
    _add_io_flags(e)

    return parser


def _config_from_args(args) -> dict:
    config = {"subcommand": args.subcommand}
    if args.subcommand in ("ttest", "regress", "evalue"):
        if getattr(args, "stdin", False):
            config["data"] = None
            config["data_inline"] = sys.stdin.read()
        else:
            config["data"] = args.data
            config["data_inline"] = None
    if args.subcommand == "ttest":
        config.update(
            group_col=args.group_col,
            value_col=args.value_col,
            groups=None if args.groups is None else [p.strip() for p in args.groups.split(",")],
            prior_scale=args.prior_scale,
            reference=args.reference,
            grid_lower=args.grid_lower,
            grid_upper=args.grid_upper,
            grid_points=args.grid_points,
            method=args.method,
            iterations=args.iterations,
            warmup=args.warmup,
            chains=args.chains,
            bandwidth=args.bandwidth,
            hpd_level=args.hpd_level,
            seed=args.seed,
            draws=args.draws,
        )
    elif args.subcommand == "regress":
        config.update(
            formula=args.formula,
            coef_scale=args.coef_scale,
            intercept_scale=args.intercept_scale,
            sigma_rate=args.sigma_rate,
            reference=args.reference,
            iterations=args.iterations,
            warmup=args.warmup,
            chains=args.chains,
            bandwidth=args.bandwidth,
            hpd_level=args.hpd_level,
            seed=args.seed,
            plot_coef=args.plot_coef,
            draws=args.draws,
        )
    elif args.subcommand == "simulate":
        config.update(
            kind=args.kind,
            n=list(_parse_pair(args.n, int, "--n")),
            mu=list(_parse_pair(args.mu, float, "--mu")),
            sd=list(_parse_pair(args.sd, float, "--sd")),
            labels=[p.strip() for p in args.labels.split(",")],
            seed=args.seed,
            out=args.out,
        )
        if len(config["labels"]) != 2:
            raise InvalidParameterError("--labels expects two comma-separated names")
    elif args.subcommand == "evalue":
        config.update(
            column=args.column,
            reference=args.reference,
            bandwidth=args.bandwidth,
        )
    if args.subcommand in ("ttest", "regress", "evalue"):
        config["theta0"] = args.theta0
        config["null_interval"] = (
            None if args.null_interval is None
            else list(_parse_pair(args.null_interval, float, "--null-interval"))
        )
        dims = getattr(args, "dims", None)
        if dims is None:
            config["dims"] = None
        else:
            parsed = _parse_dims(dims)
            config["dims"] = [parsed.k, parsed.h]
    config["report"] = args.report
    config["plot"] = getattr(args, "plot", None)
    config["digits"] = args.digits
    return config


def _verify(path) -> int:
    recorded = load_report(path)
    config = recorded.get("config") or {}
    if recorded.get("error") is not None:
        print(f"cannot verify {path}: the recorded run failed", file=sys.stderr)
        return 1
    runner = _RUNNERS.get(config.get("subcommand"))
    if runner is None:
        print(f"cannot verify {path}: unknown subcommand in config", file=sys.stderr)
        return 1
    results = runner(config, write_outputs=False)
    fresh = build_report(config, results)
    diffs = diff_reports(recorded, fresh)
    if diffs:
        print(f"verification failed: {len(diffs)} difference(s)", file=sys.stderr)
        for line in diffs[:50]:
            print(f"  {line}", file=sys.stderr)
        return 1
    print(f"verified: {path} reproduces exactly")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    config = None
    try:
        if args.verify:
            return _verify(args.verify)
        if not args.subcommand:
            print("error: a subcommand is required (ttest, regress, simulate, evalue)",
                  file=sys.stderr)
            return 1
        config = _config_from_args(args)
        results = _RUNNERS[args.subcommand](config, write_outputs=True)
    except ConvergenceError as exc:
        _report_failure(config, exc, {"rhat": exc.diagnostics.get("rhat"),
                                      "ess": exc.diagnostics.get("ess")})
        return 2
    except (FbstError, FileNotFoundError) as exc:
        _report_failure(config, exc)
        return 1

    if config["report"]:
        write_report(config["report"], build_report(config, results))
    _print_results(args.subcommand, results, config["digits"])
    return 0


def _report_failure(config, exc, extra=None):
    message = str(exc)
    print(f"error: {message}", file=sys.stderr)
    if config and config.get("report"):
        error = {"type": type(exc).__name__, "message": message}
        if extra:
            error.update(extra)
        write_report(config["report"], build_report(config, None, error=error))


if __name__ == "__main__":
    sys.exit(main())
