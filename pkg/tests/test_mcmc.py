import math

import numpy as np
import pytest

from fbst.exceptions import InvalidParameterError
from fbst.mcmc import (
    McmcConfig,
    ParameterDraws,
    effective_sample_size,
    gelman_rubin,
    rw_metropolis,
)


def _std_normal_2d(x):
    return -0.5 * float(x[0] * x[0] + x[1] * x[1])


def test_config_validates():
    with pytest.raises(InvalidParameterError):
        McmcConfig(seed=1, iterations=100, warmup=100)
    with pytest.raises(InvalidParameterError):
        McmcConfig(seed=1, chains=0)
    with pytest.raises(InvalidParameterError):
        McmcConfig(seed=True)
    with pytest.raises(InvalidParameterError):
        McmcConfig(seed=1, target_acceptance=0.0)


def test_rw_metropolis_standard_normal():
    config = McmcConfig(seed=3, iterations=4000, warmup=1000, chains=4)
    draws = rw_metropolis(_std_normal_2d, np.zeros(2), config, names=["a", "b"])
    stacked = draws.stacked()
    assert stacked.shape == (12000, 2)
    assert draws.total_draws == 12000
    assert abs(stacked.mean(axis=0)).max() < 0.08
    assert np.allclose(stacked.std(axis=0, ddof=1), 1.0, atol=0.08)
    assert draws.names == ["a", "b"]
    assert np.all((draws.acceptance_rates > 0.1) & (draws.acceptance_rates < 0.8))


def test_rw_metropolis_is_deterministic():
    config = McmcConfig(seed=9, iterations=500, warmup=200, chains=2)
    one = rw_metropolis(_std_normal_2d, np.zeros(2), config)
    two = rw_metropolis(_std_normal_2d, np.zeros(2), config)
    other = rw_metropolis(
        _std_normal_2d, np.zeros(2), McmcConfig(seed=10, iterations=500, warmup=200, chains=2)
    )
    for c in range(2):
        assert np.array_equal(one.chains[c], two.chains[c])
    assert not np.array_equal(one.chains[0], other.chains[0])


def test_thread_cap_does_not_change_draws(monkeypatch):
    config = McmcConfig(seed=21, iterations=400, warmup=150, chains=3)
    parallel = rw_metropolis(_std_normal_2d, np.zeros(2), config)
    monkeypatch.setenv("FBST_THREADS", "1")
    serial = rw_metropolis(_std_normal_2d, np.zeros(2), config)
    for c in range(3):
        assert np.array_equal(parallel.chains[c], serial.chains[c])


def test_explicit_per_chain_inits():
    config = McmcConfig(seed=4, iterations=300, warmup=100, chains=3)
    inits = np.array([[0.0, 0.0], [1.0, -1.0], [-1.0, 1.0]])
    draws = rw_metropolis(_std_normal_2d, inits, config)
    assert draws.n_chains == 3
    with pytest.raises(InvalidParameterError):
        rw_metropolis(_std_normal_2d, np.zeros((2, 2)), config)


def test_adaptation_reaches_target_rate():
    config = McmcConfig(
        seed=8, iterations=3000, warmup=1500, chains=2,
        initial_step_sizes=np.array([30.0]), target_acceptance=0.44,
    )
    draws = rw_metropolis(lambda x: -0.5 * float(x[0] ** 2), np.zeros(1), config)
    assert np.all(np.abs(draws.acceptance_rates - 0.44) < 0.12)
    # the tuned step left its absurd starting point far behind
    assert np.all(draws.step_sizes_after_warmup < 10.0)


def test_acceptance_warning_without_warmup():
    config = McmcConfig(
        seed=5, iterations=300, warmup=0, chains=1, initial_step_sizes=np.array([200.0])
    )
    with pytest.warns(RuntimeWarning):
        rw_metropolis(lambda x: -0.5 * float(x[0] ** 2), np.zeros(1), config)


def test_parameter_and_per_chain_access():
    config = McmcConfig(seed=2, iterations=200, warmup=50, chains=2)
    draws = rw_metropolis(_std_normal_2d, np.zeros(2), config, names=["x", "y"])
    x = draws.parameter("x")
    assert x.shape == (300,)
    per = draws.per_chain("y")
    assert len(per) == 2 and per[0].shape == (150,)
    with pytest.raises(InvalidParameterError):
        draws.parameter("z")


def test_gelman_rubin_iid_chains():
    rng = np.random.default_rng(14)
    chains = [rng.normal(size=(2000, 2)) for _ in range(4)]
    rhat = gelman_rubin(chains)
    assert np.all(np.abs(rhat - 1.0) < 0.01)


def test_gelman_rubin_detects_shifted_chain():
    rng = np.random.default_rng(15)
    chains = [rng.normal(size=(500, 1)) for _ in range(3)]
    chains.append(rng.normal(size=(500, 1)) + 3.0)
    assert gelman_rubin(chains)[0] > 1.2


def test_gelman_rubin_scalar_mode_and_edges():
    rng = np.random.default_rng(16)
    one_d = [rng.normal(size=800) for _ in range(4)]
    value = gelman_rubin(one_d)
    assert isinstance(value, float) and abs(value - 1.0) < 0.02
    assert gelman_rubin([np.ones(50), np.ones(50)]) == 1.0
    with pytest.warns(RuntimeWarning):
        assert math.isinf(gelman_rubin([np.zeros(50), np.ones(50)]))
    with pytest.raises(InvalidParameterError):
        gelman_rubin([np.ones(3), np.ones(3)])


def test_ess_iid_close_to_total():
    rng = np.random.default_rng(17)
    chains = [rng.normal(size=3000) for _ in range(4)]
    ess = effective_sample_size(chains)
    assert 0.5 * 12000 <= ess <= 12000


def test_ess_detects_autocorrelation():
    rng = np.random.default_rng(18)
    chains = []
    for _ in range(4):
        noise = rng.normal(size=3000)
        series = np.empty(3000)
        series[0] = noise[0]
        for i in range(1, 3000):
            series[i] = 0.95 * series[i - 1] + noise[i]
        chains.append(series)
    ess = effective_sample_size(chains)
    assert ess < 12000 / 10


def test_ess_constant_parameter():
    with pytest.warns(RuntimeWarning):
        assert effective_sample_size([np.ones(100), np.ones(100)]) == 0.0


def test_parameter_draws_total():
    chains = [np.zeros((10, 1)), np.zeros((10, 1))]
    draws = ParameterDraws(
        names=["a"], chains=chains, seed=0,
        acceptance_rates=np.zeros((2, 1)),
        step_sizes_after_warmup=np.ones((2, 1)),
        step_sizes_final=np.ones((2, 1)),
    )
    assert draws.total_draws == 20
    assert draws.stacked().shape == (20, 1)
