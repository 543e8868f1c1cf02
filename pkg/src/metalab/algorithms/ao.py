"""Aquila optimizer.

Expanded and narrowed exploration during the first two thirds of the
run, expanded and narrowed exploitation afterwards; each member picks one
of the two moves of the current phase with equal probability and keeps
the candidate only if it is strictly better.
"""
from __future__ import annotations

import numpy as np

from ..core import State
from ..rng import RngStream
from .base import AlgorithmSpec, best_so_far, integer, real, simple_init

SPIRAL_R1 = 10.0
SPIRAL_U = 0.00565
SPIRAL_OMEGA = 0.005
SPIRAL_THETA1 = 3.0 * np.pi / 2.0


def expanded_exploration(x_best, x_mean, t, T, rand):
    return x_best * (1.0 - t / T) + (x_mean - x_best * rand)


def spiral(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """``(x, y)`` of the contour-flight spiral for coordinates ``1..dim``."""
    d1 = np.arange(1, dim + 1)
    r = SPIRAL_R1 + SPIRAL_U * d1
    theta = -SPIRAL_OMEGA * d1 + SPIRAL_THETA1
    return r * np.sin(theta), r * np.cos(theta)


def narrowed_exploration(x_best, levy, x_rand, x, y, rand):
    return x_best * levy + x_rand + (y - x) * rand


def expanded_exploitation(x_best, x_mean, alpha, delta, lb, ub, rand1, rand2):
    return (x_best - x_mean) * alpha - rand1 + ((ub - lb) * rand2 + lb) * delta


def quality_function(t, T, rand):
    if T <= 1:
        return np.ones_like(np.asarray(rand, dtype=float))
    return float(t) ** ((2.0 * np.asarray(rand) - 1.0) / (1.0 - T) ** 2)


def narrowed_exploitation(x_best, X, qf, g1, g2, levy, rand1, rand2):
    return qf * x_best - g1 * X * rand1 - g2 * levy + rand2 * g1


def step(state: State, params: dict, rng: RngStream) -> State:
    n, D = state.n, state.dim
    T = state.T
    t = min(state.t, T)
    best = best_so_far(state)
    mean = state.X.mean(axis=0)
    lo, hi = state.space.lower, state.space.upper
    pick = rng.random(n) < 0.5
    r1, r2 = rng.random((n, 1)), rng.random((n, 1))
    if t <= 2.0 * T / 3.0:
        A = expanded_exploration(best, mean, t, T, r1)
        levy = rng.levy(1.5, (n, D))
        xr = state.X[rng.integers(0, n, size=n)]
        sx, sy = spiral(D)
        B = narrowed_exploration(best, levy, xr, sx, sy, r2)
    else:
        A = expanded_exploitation(best, mean, params["alpha"], params["delta"], lo, hi, r1, r2)
        qf = quality_function(t, T, rng.random((n, 1)))
        g1 = 2.0 * rng.random((n, 1)) - 1.0
        g2 = 2.0 * (1.0 - t / T)
        levy = rng.levy(1.5, (n, D))
        B = narrowed_exploitation(best, state.X, qf, g1, g2, levy, r1, r2)
    C = state.repair(np.where(pick[:, None], A, B), rng)
    fc = state.evaluate(C)
    better = fc < state.f
    state.X[better] = C[better]
    state.f[better] = fc[better]
    return state


SPEC = AlgorithmSpec(
    id="ao", name="Aquila Optimizer", tags=("SIA-nonhuman",),
    params=(
        integer("pop_size", 25, 2, 500),
        real("alpha", 0.1, 0.0, 1.0, "exploitation adjustment"),
        real("delta", 0.1, 0.0, 1.0, "exploitation adjustment"),
    ),
    init=simple_init(), step=step,
)
