"""Hyperbolic gravitational search.

Masses follow the gravitational search convention (best mass 1, worst 0,
normalized); only the ``Kbest`` heaviest agents attract, with ``Kbest``
shrinking from the whole population to 2 %.  Velocities blend the
gravitational acceleration and the pull toward the best-so-far position
with hyperbolic coefficients ``c1`` (falling from 2 to 0) and ``c2``
(rising from 0 to 2).
"""
from __future__ import annotations

import numpy as np

from .. import kernels
from ..core import State
from ..rng import RngStream
from .base import AlgorithmSpec, best_so_far, integer, population_init, real

ALPHA = 20.0
FINAL_KBEST = 0.02
DT = 1.0


def gravity_constant(G0: float, progress: float) -> float:
    return G0 * np.exp(-ALPHA * progress)


def coefficients(progress: float) -> tuple[float, float]:
    h = np.tanh(4.0 * progress) / np.tanh(4.0)
    return 2.0 - 2.0 * h, 2.0 * h


def masses(f: np.ndarray) -> np.ndarray:
    best, worst = f.min(), f.max()
    if worst == best:
        m = np.ones_like(f)
    else:
        m = (f - worst) / (best - worst)
    return m / m.sum()


def velocity(v, rand, c1, a, c2, gbest, x, dt: float = DT):
    return rand * v + c1 * a * dt + c2 * (gbest - x) / dt


def init(space, obj, params, rng, T):
    state = population_init(space, obj, int(params["pop_size"]), rng, T)
    state.aux["v"] = np.zeros_like(state.X)
    return state


def step(state: State, params: dict, rng: RngStream) -> State:
    n, D = state.n, state.dim
    prog = state.progress
    M = masses(state.f)
    k = max(1, int(round(n * (FINAL_KBEST + (1.0 - prog) * (1.0 - FINAL_KBEST)))))
    active = np.zeros(n, dtype=bool)
    active[np.argsort(-M, kind="stable")[:k]] = True
    G = gravity_constant(params["G0"], prog)
    A = kernels.gravity(state.X, M, active, rng.random((n, n)), G)
    c1, c2 = coefficients(prog)
    v = velocity(state.aux["v"], rng.random((n, 1)), c1, A, c2, best_so_far(state), state.X)
    X = state.repair(state.X + v, rng)
    state.aux["v"] = v
    state.X[:] = X
    state.f[:] = state.evaluate(X)
    return state


SPEC = AlgorithmSpec(
    id="hgsa", name="Hyperbolic Gravitational Search Algorithm", tags=("physics-chemistry",),
    params=(
        integer("pop_size", 30, 2, 500),
        real("G0", 100.0, 1.0, 300.0, "initial gravitational constant"),
    ),
    init=init, step=step,
)
