"""Improved grasshopper optimization.

The social-force move is scaled by a Gaussian factor and centred on the
best-so-far position; a Levy candidate around each new position is
adopted only when its objective value is strictly lower.
"""
from __future__ import annotations

import numpy as np

from .. import kernels
from ..core import State
from ..rng import RngStream
from .base import AlgorithmSpec, best_so_far, integer, real, simple_init


def c_schedule(cmax: float, cmin: float, l: float, L: float) -> float:
    """Linear decrease from ``cmax`` at ``l = 0`` to exactly ``cmin`` at ``l = L``."""
    return cmin + (cmax - cmin) * (1.0 - l / L)


def social_move(X: np.ndarray, c: float, lb, ub, gauss, target) -> np.ndarray:
    """``c * (sum_j c (ub-lb)/2 s(.) (x_j-x_i)/d_ij) * G + T_best``."""
    S = kernels.social_force(X)
    return c * (c * (ub - lb) / 2.0 * S) * gauss + target


def levy_candidate(x_star, rand, levy):
    return x_star + rand * levy


def adopt_levy(f_levy, f_star) -> np.ndarray:
    """Lévy candidate wins only with a strictly lower objective value."""
    return np.asarray(f_levy) < np.asarray(f_star)


def step(state: State, params: dict, rng: RngStream) -> State:
    n, D = state.n, state.dim
    lo, hi = state.space.lower, state.space.upper
    c = c_schedule(params["cmax"], params["cmin"], min(state.t, state.T), state.T)
    gauss = rng.normal((n, D))
    Xs = state.repair(social_move(state.X, c, lo, hi, gauss, best_so_far(state)), rng)
    fs = state.evaluate(Xs)
    Xl = state.repair(levy_candidate(Xs, rng.random((n, D)), rng.levy(params["beta"], (n, D))), rng)
    fl = state.evaluate(Xl)
    take = adopt_levy(fl, fs)
    state.X[:] = np.where(take[:, None], Xl, Xs)
    state.f[:] = np.where(take, fl, fs)
    return state


SPEC = AlgorithmSpec(
    id="igoa", name="Improved Grasshopper Optimization Algorithm", tags=("SIA-nonhuman",),
    params=(
        integer("pop_size", 30, 2, 500),
        real("cmax", 1.0, 0.1, 2.0, "initial comfort-zone coefficient"),
        real("cmin", 4e-5, 0.0, 0.1, "final comfort-zone coefficient"),
        real("beta", 1.5, 0.3, 1.99, "Levy index"),
    ),
    init=simple_init(), step=step,
    generation_cost=lambda p, d: 2 * int(p["pop_size"]),
)
