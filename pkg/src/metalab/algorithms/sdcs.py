"""Snap-drift cuckoo search.

Each generation runs a Levy crossover phase and a gated mutation phase,
both followed by greedy replacement.  The switching probability ``p_a``
moves away from the crossover success rate ``p_m`` by ``omega``: down in
snap mode (``p_m <= 0.5``), up in drift mode.
"""
from __future__ import annotations

import numpy as np

from ..core import State, greedy
from ..rng import RngStream
from .base import AlgorithmSpec, integer, real, population_init


def switching_probability(p_m: float, omega: float) -> float:
    if 0.0 <= p_m <= 0.5:           # snap
        return max(0.0, p_m - omega)
    return min(1.0, p_m + omega)    # drift


def crossover(xi, xj, p, J: float, a0: float, levy) -> np.ndarray:
    """Branches in the printed order; ``p`` selects the branch per row."""
    xi, xj = np.atleast_2d(xi), np.atleast_2d(xj)
    p = np.broadcast_to(np.asarray(p, dtype=float).reshape(-1, 1), (xi.shape[0], 1))
    first = xi + a0 * (xj * levy - xi)
    middle = xi + a0 * (xj - xi) * levy
    last = xi + a0 * (xj - xi) * levy
    return np.where(p < J, first, np.where(p <= 1.0 - J, middle, last))


def heaviside(z) -> np.ndarray:
    return (np.asarray(z) > 0).astype(float)


def mutation(xi, xj, p, J: float, p_a: float, eps, r) -> np.ndarray:
    xi, xj = np.atleast_2d(xi), np.atleast_2d(xj)
    n = xi.shape[0]
    p = np.broadcast_to(np.asarray(p, dtype=float).reshape(-1, 1), (n, 1))
    gate = heaviside(p_a - np.broadcast_to(np.asarray(eps, dtype=float).reshape(-1, 1), (n, 1)))
    first = xi + gate * (xj * r - xi)
    middle = xi + gate * (xj - xi) * r
    last = xi + gate * (xj - xi)
    return np.where(p < J, first, np.where(p <= 1.0 - J, middle, last))


def init(space, obj, params, rng, T):
    state = population_init(space, obj, int(params["pop_size"]), rng, T)
    state.aux.update(p_m=0.0, p_a=0.25)
    return state


def step(state: State, params: dict, rng: RngStream) -> State:
    n, D = state.n, state.dim
    J, a0, omega, beta = params["J"], params["a0"], params["omega"], params["beta"]

    j = rng.distinct_rows(n, 1)[:, 0]
    p = rng.random(n)
    L = rng.levy(beta, (n, D))
    C = state.repair(crossover(state.X, state.X[j], p, J, a0, L), rng)
    fc = state.evaluate(C)
    success = fc < state.f
    greedy(state, C, fc)

    p_m = float(success.mean())
    p_a = switching_probability(p_m, omega)
    state.aux.update(p_m=p_m, p_a=p_a)

    j = rng.distinct_rows(n, 1)[:, 0]
    p = rng.random(n)
    eps = rng.random(n)
    r = rng.random((n, D))
    M = state.repair(mutation(state.X, state.X[j], p, J, p_a, eps, r), rng)
    greedy(state, M, state.evaluate(M))
    return state


SPEC = AlgorithmSpec(
    id="sdcs", name="Snap-Drift Cuckoo Search", tags=("SIA-nonhuman",),
    params=(
        integer("pop_size", 25, 3, 500),
        real("omega", 0.5, 0.0, 1.0, "switching-probability rate"),
        real("J", 0.2, 0.0, 1.0, "branch probability"),
        real("a0", 0.1, 0.0, 1.0, "Levy step scale"),
        real("beta", 1.5, 0.3, 1.99, "Levy index"),
    ),
    init=init, step=step,
    init_cost=lambda p, d: int(p["pop_size"]),
    generation_cost=lambda p, d: 2 * int(p["pop_size"]),
)
