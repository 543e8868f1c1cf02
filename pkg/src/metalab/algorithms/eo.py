"""Equilibrium optimizer.

The equilibrium pool holds the four best concentrations seen so far and
their mean.  Each member moves toward a random pool candidate through the
exponential term ``F`` and the generation rate ``G``, and keeps its old
concentration when that was better (memory saving).
"""
from __future__ import annotations

import numpy as np

from ..core import State, greedy
from ..rng import RngStream
from .base import AlgorithmSpec, integer, population_init, real

V = 1.0
LAMBDA_FLOOR = 1e-12


def time_factor(progress: float, a2: float) -> float:
    return (1.0 - progress) ** (a2 * progress)


def exponential_term(a1, r, lam, t_):
    return a1 * np.sign(r - 0.5) * (np.exp(-lam * t_) - 1.0)


def generation_rate(c_eq, C, lam, F, r1, r2, GP):
    gcp = np.where(np.asarray(r2) >= GP, 0.5 * np.asarray(r1), 0.0)
    gcp = np.reshape(gcp, np.shape(gcp) + (1,) * (np.ndim(C) - np.ndim(gcp)))
    return gcp * (c_eq - lam * C) * F


def concentration_update(C, c_eq, F, G, lam):
    return c_eq + (C - c_eq) * F + G / (lam * V) * (1.0 - F)


def _update_pool(state: State) -> None:
    aux = state.aux
    allX = np.vstack([aux["pool_X"], state.X]) if "pool_X" in aux else state.X
    allf = np.concatenate([aux["pool_f"], state.f]) if "pool_f" in aux else state.f
    order = np.argsort(allf, kind="stable")[:4]
    aux["pool_X"], aux["pool_f"] = allX[order].copy(), allf[order].copy()


def init(space, obj, params, rng, T):
    state = population_init(space, obj, int(params["pop_size"]), rng, T)
    _update_pool(state)
    return state


def step(state: State, params: dict, rng: RngStream) -> State:
    n, D = state.n, state.dim
    _update_pool(state)
    pool = np.vstack([state.aux["pool_X"], state.aux["pool_X"].mean(axis=0)])
    t_ = time_factor(state.progress, params["a2"])
    c_eq = pool[rng.integers(0, len(pool), size=n)]
    lam = np.maximum(rng.random((n, D)), LAMBDA_FLOOR)
    F = exponential_term(params["a1"], rng.random((n, D)), lam, t_)
    G = generation_rate(c_eq, state.X, lam, F, rng.random(n), rng.random(n), params["GP"])
    C = state.repair(concentration_update(state.X, c_eq, F, G, lam), rng)
    greedy(state, C, state.evaluate(C))
    return state


SPEC = AlgorithmSpec(
    id="eo", name="Equilibrium Optimizer", tags=("physics-chemistry",),
    params=(
        integer("pop_size", 30, 2, 500),
        real("a1", 2.0, 0.0, 3.0, "exploration constant"),
        real("a2", 1.0, 0.0, 2.0, "exploitation constant"),
        real("GP", 0.5, 0.0, 1.0, "generation probability"),
    ),
    init=init, step=step,
)
