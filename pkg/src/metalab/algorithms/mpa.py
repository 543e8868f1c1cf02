"""Marine predators algorithm.

The run is split into thirds: Brownian prey moves, then a split
Levy/Brownian phase, then Levy predator moves.  Each phase step is
followed by memory saving (greedy against the previous positions) and
the fish-aggregating-device perturbation, followed by memory saving again.
"""
from __future__ import annotations

import numpy as np

from ..core import State, greedy
from ..rng import RngStream
from .base import AlgorithmSpec, best_so_far, integer, real, simple_init


def adaptive_cf(progress: float) -> float:
    return (1.0 - progress) ** (2.0 * progress)


def prey_move(prey, elite, R, P, draw):
    """Prey-driven step: ``step = draw (Elite - draw Prey)``, ``Prey += P R step``."""
    step = draw * (elite - draw * prey)
    return prey + P * R * step, step


def predator_move(prey, elite, P, CF, draw):
    """Predator-driven step: ``step = draw (draw Elite - Prey)``, ``Prey = Elite + P CF step``."""
    step = draw * (draw * elite - prey)
    return elite + P * CF * step, step


def fads(X, lb, ub, CF, FADs, r, U, R, Xr1, Xr2):
    """Fish-aggregating-device effect for rows with scalar draw ``r``."""
    r = np.asarray(r).reshape(-1, 1)
    jump = X + CF * (lb + R * (ub - lb)) * U
    swap = X + (FADs * (1.0 - r) + r) * (Xr1 - Xr2)
    return np.where(r < FADs, jump, swap)


def step(state: State, params: dict, rng: RngStream) -> State:
    n, D = state.n, state.dim
    P, FADs = params["P"], params["FADs"]
    prog = state.progress
    CF = adaptive_cf(prog)
    elite = np.broadcast_to(best_so_far(state), (n, D))
    X = state.X
    R = rng.random((n, D))
    if prog < 1.0 / 3.0:
        new, _ = prey_move(X, elite, R, P, rng.normal((n, D)))
    elif prog < 2.0 / 3.0:
        h = n // 2
        RL = rng.levy(1.5, (h, D))
        RB = rng.normal((n - h, D))
        top, _ = prey_move(X[:h], elite[:h], R[:h], P, RL)
        bottom, _ = predator_move(X[h:], elite[h:], P, CF, RB)
        new = np.vstack([top, bottom])
    else:
        new, _ = predator_move(X, elite, P, CF, rng.levy(1.5, (n, D)))
    new = state.repair(new, rng)
    greedy(state, new, state.evaluate(new))

    lo, hi = state.space.lower, state.space.upper
    U = (rng.random((n, D)) < FADs).astype(float)
    perm1, perm2 = rng.permutation(n), rng.permutation(n)
    Y = fads(state.X, lo, hi, CF, FADs, rng.random(n), U, rng.random((n, D)),
             state.X[perm1], state.X[perm2])
    Y = state.repair(Y, rng)
    greedy(state, Y, state.evaluate(Y))
    return state


SPEC = AlgorithmSpec(
    id="mpa", name="Marine Predators Algorithm", tags=("SIA-nonhuman",),
    params=(
        integer("pop_size", 25, 2, 500),
        real("P", 0.5, 0.0, 2.0, "step constant"),
        real("FADs", 0.2, 0.0, 1.0, "fish-aggregating-device probability"),
    ),
    init=simple_init(), step=step,
    generation_cost=lambda p, d: 2 * int(p["pop_size"]),
)
