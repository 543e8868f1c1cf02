"""Reference optimizers used to calibrate the origin-bias audit.

``origin-magnet`` halves every position each generation, so it reaches the
origin regardless of where the optimum lies.  ``random-search`` samples
uniformly in a box of the problem's width centred on the problem's
optimizer; its behaviour relative to the optimum is the same whether or
not the problem is shifted.
"""
from __future__ import annotations

import numpy as np

from ..core import State, greedy
from ..rng import RngStream
from .base import AlgorithmSpec, integer, real, simple_init


def magnet_step(state: State, params: dict, rng: RngStream) -> State:
    X = state.repair(params["rate"] * state.X, rng)
    state.X[:] = X
    state.f[:] = state.evaluate(X)
    return state


def _centred(state: State, rng: RngStream) -> np.ndarray:
    centre = np.asarray(state.objective.problem.optimizer, dtype=float)
    half = state.space.width / 2.0
    return centre + rng.uniform(-half, half, (state.n, state.dim))


def random_init(space, obj, params, rng, T):
    state = simple_init()(space, obj, params, rng, T)
    X = _centred(state, rng)
    state.X[:] = X
    state.f[:] = obj(X)
    return state


def random_step(state: State, params: dict, rng: RngStream) -> State:
    X = _centred(state, rng)
    greedy(state, X, state.evaluate(X))
    return state


ORIGIN_MAGNET = AlgorithmSpec(
    id="origin-magnet", name="Origin magnet (calibration toy)", tags=(),
    params=(integer("pop_size", 10, 1, 500), real("rate", 0.5, 0.0, 1.0, "contraction factor")),
    init=simple_init(), step=magnet_step,
)

RANDOM_SEARCH = AlgorithmSpec(
    id="random-search", name="Optimum-centred random search (calibration toy)", tags=(),
    params=(integer("pop_size", 10, 1, 500),),
    init=random_init, step=random_step,
    init_cost=lambda p, d: 2 * int(p["pop_size"]),
)
