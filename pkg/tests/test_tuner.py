import json

import numpy as np
import pytest

from metalab.algorithms import lookup
from metalab.algorithms.base import categorical, integer, real
from metalab.benchmarks import make_problem
from metalab.core import ConfigError
from metalab.rng import RngStream, mix64
from metalab.tuner import (SamplingModel, initial_model, race, sample_configs,
                           truncated_normal, tune, update_model)

THETA = real("theta", 0.5, 0.0, 1.0)
SIZE = integer("size", 10, 1, 100)
KIND = categorical("kind", "a", ("a", "b", "c"))


# ---------------------------------------------------------------- sampling
def test_zero_sd_returns_mean():
    model = SamplingModel(numeric={"theta": (0.3, 0.0)}, uniform=False)
    cfgs = sample_configs(model, [THETA], 50, RngStream(0))
    assert {c["theta"] for c in cfgs} == {0.3}


def test_uniform_model_covers_box():
    cfgs = sample_configs(initial_model([THETA, SIZE]), [THETA, SIZE], 2000, RngStream(1))
    theta = np.array([c["theta"] for c in cfgs])
    size = np.array([c["size"] for c in cfgs])
    assert np.all((theta >= 0) & (theta <= 1)) and np.all((size >= 1) & (size <= 100))
    assert np.all(np.histogram(theta, bins=10, range=(0, 1))[0] > 100)
    assert size.min() == 1 and size.max() == 100


def test_categorical_certain_choice():
    model = initial_model([KIND])
    model.categorical["kind"] = np.array([0.0, 1.0, 0.0])
    assert {c["kind"] for c in sample_configs(model, [KIND], 100, RngStream(2))} == {"b"}


def test_truncated_normal_stays_in_bounds():
    for u in np.linspace(0, 1, 11):
        assert 0.0 <= truncated_normal(5.0, 0.1, 0.0, 1.0, u) <= 1.0
    assert truncated_normal(0.5, 1.0, 0.0, 1.0, 0.5) == pytest.approx(0.5)


def test_sample_configs_rejects_zero():
    with pytest.raises(ConfigError):
        sample_configs(initial_model([THETA]), [THETA], 0, RngStream(0))


# ---------------------------------------------------------------- model update
def test_update_model_examples():
    model = initial_model([THETA, KIND])
    elites = [{"theta": 0.8, "kind": "c"}] * 3
    new = update_model(model, elites, [THETA, KIND])
    assert new.numeric["theta"] == pytest.approx((0.8, 0.5 * 0.9), rel=1e-15)
    np.testing.assert_allclose(new.categorical["kind"], [1 / 6, 1 / 6, 2 / 3])
    same = update_model(model, elites, [THETA], decay=1.0)
    assert same.numeric["theta"][1] == model.numeric["theta"][1]
    again = update_model(new, elites, [THETA, KIND])
    assert again.numeric["theta"][1] < new.numeric["theta"][1]
    with pytest.raises(ConfigError):
        update_model(model, [], [THETA])


# ---------------------------------------------------------------- racing
def _noisy(center):
    def evaluate(cfg, inst, seed):
        noise = RngStream(mix64(seed, inst)).normal() * 1e-3
        return (cfg["theta"] - center) ** 2 + noise
    return evaluate


def test_identical_configs_survive():
    st = race([{"theta": 0.5}] * 4, list(range(12)), lambda c, i, s: c["theta"] + i, 1)
    assert st.survivors == [0, 1, 2, 3]
    assert all(not h["dropped"] for h in st.history)


def test_dominant_config_survives():
    cfgs = [{"theta": t} for t in (0.1, 0.5, 0.9, 0.3)]
    st = race(cfgs, list(range(20)), _noisy(0.3), 1)
    assert 3 in st.survivors
    assert len(st.survivors) < 4
    assert st.ranking()[0] == 3


def test_quadratic_grid_recovered():
    grid = np.linspace(0, 1, 21)
    # exhaustive oracle on the noise-free score
    assert grid[np.argmin((grid - 0.3) ** 2)] == pytest.approx(0.3)
    st = race([{"theta": float(t)} for t in grid], list(range(30)), _noisy(0.3), 1,
              rng=RngStream(4))
    best = st.configs[st.ranking()[0]]["theta"]
    assert abs(best - 0.3) <= 0.1


def test_race_respects_max_evals_and_logs():
    log = []
    st = race([{"theta": t} for t in (0.1, 0.2, 0.3)], list(range(10)), _noisy(0.0), 7,
              max_evals=100, log=log)
    assert st.evals_used <= 100 and st.instances_seen == 4
    assert len(log) == 12 and {"config", "instance", "seed", "score"} <= set(log[0])


def test_race_errors():
    with pytest.raises(ConfigError):
        race([{"theta": 0.1}, {"theta": 0.2}], [0], _noisy(0), 0)
    with pytest.raises(ConfigError):
        race([{"theta": 0.1}, {"theta": 0.2}], [0], _noisy(0), 1, max_evals=0)
    with pytest.raises(ConfigError):
        race([{"theta": 0.1}], [0], _noisy(0), 1)


# ---------------------------------------------------------------- tune
def test_tune_synthetic_pop_size(tmp_path):
    # exhaustive sweep oracle: the loss is minimized exactly at 40
    sweep = {n: abs(n - 40) for n in range(6, 501)}
    assert min(sweep, key=sweep.get) == 40

    def loss(cfg, inst, seed):
        return abs(cfg["pop_size"] - 40) + 0.01 * RngStream(mix64(seed, inst)).random()

    res = tune(lookup("de"), ["pop_size"], list(range(10)), 4000, RngStream(3),
               evaluate=loss, budget_per_eval=1, audit_path=tmp_path / "audit.jsonl")
    assert abs(res.best["pop_size"] - 40) <= 5
    assert res.evals_used <= 4000
    assert np.all(np.diff(res.best_trace) <= 0)
    kinds = [json.loads(line)["kind"] for line in open(tmp_path / "audit.jsonl")]
    assert kinds.count("evaluation") == len(res.log) and kinds[-1] == "result"


def test_tune_de_F_on_sphere():
    insts = [make_problem("sphere", 2, shift_mode="random-interior", rng=RngStream(i))
             for i in range(5)]
    res = tune(lookup("de"), ["F"], insts, 120000, RngStream(0), budget_per_eval=1000,
               fixed={"pop_size": 10})
    assert 0.0 < res.best["F"] < 1.0
    assert res.evals_used <= 120000


def test_tune_budget_too_small():
    with pytest.raises(ConfigError, match="cannot pay"):
        tune(lookup("de"), ["F"], list(range(5)), 10, RngStream(0),
             evaluate=lambda c, i, s: 0.0, budget_per_eval=5)
    with pytest.raises(ConfigError):
        tune(None, None, [1], 100, RngStream(0))
