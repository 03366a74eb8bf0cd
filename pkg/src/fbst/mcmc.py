"""Adaptive componentwise random-walk Metropolis, plus convergence diagnostics.

One Gaussian proposal per component per iteration.  Step sizes adapt only
during warmup (toward a target acceptance rate) and are frozen afterwards, so
the post-warmup chain is a plain Metropolis chain.  Chains run on independent
PCG64 streams derived from the master seed with the generator's jump
function, which makes every run bitwise reproducible for a given config.
"""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.random import PCG64, Generator

from .exceptions import InvalidParameterError
from .validation import check_probability, check_seed

_ADAPT_BATCH = 25


@dataclass(frozen=True)
class McmcConfig:
    seed: int
    iterations: int = 2500
    warmup: int = 1000
    chains: int = 4
    initial_step_sizes: tuple | None = None
    target_acceptance: float = 0.44

    def __post_init__(self):
        check_seed(self.seed)
        if self.iterations < 2:
            raise InvalidParameterError("iterations must be at least 2")
        if not 0 <= self.warmup < self.iterations:
            raise InvalidParameterError("warmup must satisfy 0 <= warmup < iterations")
        if self.chains < 1:
            raise InvalidParameterError("chains must be at least 1")
        check_probability(self.target_acceptance, "target_acceptance", inclusive=False)
        if self.initial_step_sizes is not None:
            steps = tuple(float(s) for s in self.initial_step_sizes)
            if any(not math.isfinite(s) or s <= 0 for s in steps):
                raise InvalidParameterError("initial_step_sizes must be positive")
            object.__setattr__(self, "initial_step_sizes", steps)


@dataclass
class ParameterDraws:
    """Post-warmup draws: one (kept, n_params) array per chain."""

    names: list
    chains: list
    seed: int
    acceptance_rates: np.ndarray  # (n_chains, n_params), post-warmup
    step_sizes_after_warmup: np.ndarray  # (n_chains, n_params)
    step_sizes_final: np.ndarray  # identical unless adaptation leaked past warmup
    true_values: dict = field(default_factory=dict)

    @property
    def n_chains(self) -> int:
        return len(self.chains)

    @property
    def total_draws(self) -> int:
        return sum(c.shape[0] for c in self.chains)

    def stacked(self) -> np.ndarray:
        return np.concatenate(self.chains, axis=0)

    def parameter(self, name) -> np.ndarray:
        try:
            j = self.names.index(name)
        except ValueError:
            raise InvalidParameterError(
                f"unknown parameter {name!r}; have {self.names}"
            ) from None
        return self.stacked()[:, j]

    def per_chain(self, name) -> list:
        j = self.names.index(name)
        return [c[:, j] for c in self.chains]


def _run_chain(log_target, x0, steps0, config, bitgen):
    rng = Generator(bitgen)
    iterations, warmup = config.iterations, config.warmup
    d = x0.size
    target = config.target_acceptance
    noise = rng.standard_normal((iterations, d))
    log_u = np.log(rng.random((iterations, d)))

    x = [float(v) for v in x0]
    log_steps = [math.log(s) for s in steps0]
    lp = float(log_target(np.asarray(x)))
    if not math.isfinite(lp):
        raise InvalidParameterError(f"initial point has non-finite log density: {x}")

    kept = np.empty((iterations - warmup, d), dtype=float)
    batch_acc = [0] * d
    post_acc = [0] * d
    steps_after_warmup = None
    batch_no = 0
    steps = [math.exp(ls) for ls in log_steps]
    for t in range(iterations):
        for j in range(d):
            old = x[j]
            x[j] = old + steps[j] * noise[t, j]
            lp_new = float(log_target(np.asarray(x)))
            if log_u[t, j] < lp_new - lp:
                lp = lp_new
                if t >= warmup:
                    post_acc[j] += 1
                else:
                    batch_acc[j] += 1
            else:
                x[j] = old
        if t < warmup and (t + 1) % _ADAPT_BATCH == 0:
            batch_no += 1
            gain = 1.0 / (1.0 + 0.15 * batch_no)
            for j in range(d):
                rate = batch_acc[j] / _ADAPT_BATCH
                log_steps[j] += gain * (rate - target)
                batch_acc[j] = 0
            steps = [math.exp(ls) for ls in log_steps]
        if t == warmup - 1:
            steps_after_warmup = list(steps)
        if t >= warmup:
            kept[t - warmup] = x
    if steps_after_warmup is None:  # warmup == 0
        steps_after_warmup = list(steps)
    n_post = iterations - warmup
    acc_rates = np.array(post_acc, dtype=float) / n_post
    return kept, acc_rates, np.asarray(steps_after_warmup), np.asarray(steps)


def rw_metropolis(log_target, initial, config: McmcConfig, names=None) -> ParameterDraws:
    """Sample ``log_target`` with componentwise Gaussian random-walk Metropolis.

    Parameters
    ----------
    log_target : callable
        Maps a parameter vector to an (unnormalized) log density; may return
        -inf outside the support.
    initial : array_like
        Either one starting point of shape (d,) shared by all chains, or a
        (chains, d) array of per-chain starting points.
    config : McmcConfig
    names : sequence of str, optional
        Parameter names; defaults to p0, p1, ...
    """
    init = np.asarray(initial, dtype=float)
    if init.ndim == 1:
        init = np.tile(init, (config.chains, 1))
    if init.ndim != 2 or init.shape[0] != config.chains:
        raise InvalidParameterError(
            f"initial must be (d,) or (chains, d); got shape {init.shape}"
        )
    d = init.shape[1]
    if names is None:
        names = [f"p{j}" for j in range(d)]
    names = list(names)
    if len(names) != d:
        raise InvalidParameterError("names length must match the parameter count")
    if config.initial_step_sizes is not None:
        if len(config.initial_step_sizes) != d:
            raise InvalidParameterError("initial_step_sizes length must match parameters")
        steps0 = list(config.initial_step_sizes)
    else:
        steps0 = [1.0] * d

    master = PCG64(config.seed)
    bitgens = [master.jumped(c) for c in range(config.chains)]
    threads = int(os.environ.get("FBST_THREADS") or 0) or config.chains
    def _one(c):
        return _run_chain(log_target, init[c], steps0, config, bitgens[c])

    if threads > 1 and config.chains > 1:
        with ThreadPoolExecutor(max_workers=min(threads, config.chains)) as pool:
            results = list(pool.map(_one, range(config.chains)))
    else:
        results = [_one(c) for c in range(config.chains)]

    chains = [r[0] for r in results]
    acc = np.stack([r[1] for r in results])
    steps_warm = np.stack([r[2] for r in results])
    steps_final = np.stack([r[3] for r in results])
    if np.any(acc < 0.1) or np.any(acc > 0.8):
        warnings.warn(
            "post-warmup acceptance outside [0.1, 0.8] for at least one component; "
            "step-size adaptation may have failed",
            RuntimeWarning,
            stacklevel=2,
        )
    return ParameterDraws(
        names=names,
        chains=chains,
        seed=config.seed,
        acceptance_rates=acc,
        step_sizes_after_warmup=steps_warm,
        step_sizes_final=steps_final,
    )


def _split_halves(chains):
    half = min(c.shape[0] for c in chains) // 2
    seqs = []
    for c in chains:
        n = c.shape[0]
        seqs.append(c[:half])
        seqs.append(c[n - half :])
    return seqs, half


def _as_chain_list(draws):
    """Normalize input to 2-d per-chain arrays; True when input was 1-d."""
    chains = draws.chains if isinstance(draws, ParameterDraws) else [np.asarray(c, dtype=float) for c in draws]
    if chains and chains[0].ndim == 1:
        return [c[:, None] for c in chains], True
    return chains, False


def gelman_rubin(draws):
    """Split-chain potential scale reduction factor.

    Accepts a ParameterDraws or a list of per-chain arrays; 1-d chains give
    a scalar, (n, d) chains give one value per parameter.
    """
    chains, scalar = _as_chain_list(draws)
    if min(c.shape[0] for c in chains) < 4:
        raise InvalidParameterError("need at least 4 draws per chain for split R-hat")
    seqs, half = _split_halves(chains)
    arr = np.stack(seqs)  # (m, half, d)
    means = arr.mean(axis=1)
    variances = arr.var(axis=1, ddof=1)
    w = variances.mean(axis=0)
    b_over_n = means.var(axis=0, ddof=1)
    out = np.empty(arr.shape[2], dtype=float)
    for j in range(arr.shape[2]):
        if w[j] == 0.0:
            if b_over_n[j] == 0.0:
                out[j] = 1.0
            else:
                warnings.warn("constant chains with differing values", RuntimeWarning, stacklevel=2)
                out[j] = math.inf
            continue
        var_plus = (half - 1) / half * w[j] + b_over_n[j]
        out[j] = math.sqrt(var_plus / w[j])
    return float(out[0]) if scalar else out


def _autocovariance(x):
    n = x.size
    centered = x - x.mean()
    size = 1
    while size < 2 * n:
        size <<= 1
    f = np.fft.rfft(centered, size)
    acov = np.fft.irfft(f * np.conj(f), size)[:n].real / n
    return acov


def effective_sample_size(draws):
    """Autocorrelation-based effective sample size.

    Combines chains, truncates the autocorrelation sum where Geyer's paired
    sums stop being positive (enforcing monotonicity), and caps the result at
    the total number of draws.  Constant chains yield 0 with a warning.
    Accepts the same inputs as :func:`gelman_rubin`, with the same scalar
    behavior for 1-d chains.
    """
    chains, scalar = _as_chain_list(draws)
    n = min(c.shape[0] for c in chains)
    c_count = len(chains)
    if n * c_count < 8:
        raise InvalidParameterError("need at least 8 total draws for an ESS estimate")
    d = chains[0].shape[1]
    total = n * c_count
    out = np.empty(d, dtype=float)
    for j in range(d):
        series = [c[:n, j] for c in chains]
        acovs = np.stack([_autocovariance(s) for s in series])  # (C, n)
        chain_vars = acovs[:, 0] * n / (n - 1)
        if np.all(chain_vars == 0.0):
            warnings.warn(f"parameter {j} is constant across draws", RuntimeWarning, stacklevel=2)
            out[j] = 0.0
            continue
        mean_var = chain_vars.mean()
        var_plus = mean_var * (n - 1) / n
        if c_count > 1:
            var_plus += np.array([s.mean() for s in series]).var(ddof=1)
        rho = 1.0 - (mean_var - acovs.mean(axis=0)) / var_plus
        rho[0] = 1.0
        # Geyer pairs: keep adding rho_{2m} + rho_{2m+1} while positive and
        # nonincreasing.
        tau = 0.0
        prev_pair = math.inf
        m = 0
        while 2 * m + 1 < n:
            pair = rho[2 * m] + rho[2 * m + 1]
            if pair <= 0.0:
                break
            pair = min(pair, prev_pair)
            tau += pair
            prev_pair = pair
            m += 1
        tau = max(2.0 * tau - 1.0, 1e-12)
        out[j] = min(total / tau, float(total))
    return float(out[0]) if scalar else out
