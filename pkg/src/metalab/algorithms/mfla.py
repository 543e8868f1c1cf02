"""Memetic frog leaping.

Frogs are sorted and dealt round-robin into ``m`` memeplexes of ``n``.
Within each memeplex the worst frog leaps toward the memeplex best and an
auxiliary centre (geometric or fitness-weighted, chosen at random) for
``n`` lockstep rounds, accepting only improvements.  A memetic refinement
then samples around each memeplex best with spread ``beta`` times the
memeplex standard deviation.
"""
from __future__ import annotations

import numpy as np

from ..core import ConfigError, State
from ..rng import RngStream
from .base import AlgorithmSpec, integer, population_init, real
from .hgsa import masses


def geometric_center(Q: np.ndarray) -> np.ndarray:
    return Q.mean(axis=0)


def gravitational_center(Q: np.ndarray, f: np.ndarray) -> np.ndarray:
    return masses(f) @ Q


def choose_center(q_g, q_c, rand) -> np.ndarray:
    return q_g if rand < 0.5 else q_c


def leap(q_w, q_best, q_m, rand1, rand2) -> np.ndarray:
    return q_w + rand1 * (q_best - q_w) + rand2 * (q_m - q_w)


def _check(params) -> tuple[int, int]:
    m, k = int(params["m"]), int(params["n"])
    if m < 1 or k < 2:
        raise ConfigError("MFLA needs m >= 1 memeplexes of n >= 2 frogs")
    return m, k


def init(space, obj, params, rng, T):
    m, k = _check(params)
    return population_init(space, obj, m * k, rng, T)


def step(state: State, params: dict, rng: RngStream) -> State:
    m, k = _check(params)
    if state.n != m * k:
        raise ConfigError(f"population of {state.n} does not equal m*n = {m * k}")
    D = state.dim
    order = np.argsort(state.f, kind="stable")
    plexes = [order[j::m] for j in range(m)]
    for _ in range(k):
        cand = np.empty((m, D))
        worst = np.empty(m, dtype=int)
        for j, idx in enumerate(plexes):
            fj = state.f[idx]
            b, w = idx[int(np.argmin(fj))], idx[int(np.argmax(fj))]
            worst[j] = w
            Q = state.X[idx]
            q_m = choose_center(geometric_center(Q), gravitational_center(Q, fj), rng.random())
            cand[j] = leap(state.X[w], state.X[b], q_m, rng.random(D), rng.random(D))
        cand = state.repair(cand, rng)
        fc = state.evaluate(cand)
        better = fc < state.f[worst]
        state.X[worst[better]] = cand[better]
        state.f[worst[better]] = fc[better]

    cand = np.empty((m, D))
    best = np.empty(m, dtype=int)
    for j, idx in enumerate(plexes):
        b = idx[int(np.argmin(state.f[idx]))]
        best[j] = b
        cand[j] = state.X[b] + params["beta"] * state.X[idx].std(axis=0) * rng.normal(D)
    cand = state.repair(cand, rng)
    fc = state.evaluate(cand)
    better = fc < state.f[best]
    state.X[best[better]] = cand[better]
    state.f[best[better]] = fc[better]
    return state


SPEC = AlgorithmSpec(
    id="mfla", name="Memetic Frog Leaping Algorithm", tags=("SIA-nonhuman",),
    params=(
        integer("m", 4, 1, 20, "number of memeplexes"),
        integer("n", 5, 2, 50, "frogs per memeplex"),
        real("beta", 0.6, 0.0, 2.0, "memetic refinement spread"),
    ),
    init=init, step=step,
    init_cost=lambda p, d: int(p["m"]) * int(p["n"]),
    generation_cost=lambda p, d: int(p["m"]) * (int(p["n"]) + 1),
)
