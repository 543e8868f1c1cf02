"""Multi-strategy sine cosine algorithm.

The sine/cosine move is applied to every member and replaces it
unconditionally.  Afterwards each member, with probability ``Pc``, tries
one auxiliary operator chosen uniformly from Cauchy mutation,
opposition-based learning, DE/rand/1/bin, DE/current-to-best/1/bin and a
logistic-map chaotic local search around the best solution; the
auxiliary candidate replaces the member only if it is no worse.
"""
from __future__ import annotations

import numpy as np

from ..core import State
from ..rng import RngStream
from .base import AlgorithmSpec, best_so_far, integer, population_init, real
from .de import binomial

AUX_F, AUX_CR = 0.5, 0.9
N_AUX = 5


def r1_schedule(a: float, t: float, T: float) -> float:
    return a - t * a / T


def sca_update(X, P, r1, r2, r3, r4) -> np.ndarray:
    """Sine branch where ``r4 < 0.5``, cosine branch otherwise."""
    trig = np.where(r4 < 0.5, np.sin(r2), np.cos(r2))
    return X + r1 * trig * np.abs(r3 * P - X)


def logistic(z, mu: float):
    return mu * z * (1.0 - z)


def init(space, obj, params, rng, T):
    state = population_init(space, obj, int(params["pop_size"]), rng, T)
    z = rng.random((state.n, space.dim))
    # keep the chaotic state off the logistic map's fixed points
    state.aux["chaos"] = np.where((z < 1e-6) | (np.abs(z - 0.75) < 1e-6), 0.7, z)
    return state


def _auxiliary(state: State, i: np.ndarray, kind: np.ndarray, P: np.ndarray,
               params: dict, rng: RngStream) -> np.ndarray:
    X, n, D = state.X, state.n, state.dim
    lo, hi = state.space.lower, state.space.upper
    out = X[i].copy()
    r = rng.distinct_rows(n, 3)[i]
    cross_u, cross_j = rng.random((len(i), D)), rng.integers(0, D, size=len(i))
    cauchy = rng.cauchy((len(i), D))
    lam = 1.0 - state.progress + 1.0 / state.T
    for row, (idx, k) in enumerate(zip(i, kind)):
        x = X[idx]
        if k == 0:
            out[row] = x * (1.0 + cauchy[row])
        elif k == 1:
            out[row] = lo + hi - x
        elif k == 2:
            v = X[r[row, 0]] + AUX_F * (X[r[row, 1]] - X[r[row, 2]])
            out[row] = binomial(x, v, AUX_CR, cross_u[row], cross_j[row])
        elif k == 3:
            v = x + AUX_F * (P - x) + AUX_F * (X[r[row, 0]] - X[r[row, 1]])
            out[row] = binomial(x, v, AUX_CR, cross_u[row], cross_j[row])
        else:
            z = logistic(state.aux["chaos"][idx], params["mu"])
            state.aux["chaos"][idx] = z
            out[row] = (1.0 - lam) * P + lam * (lo + z * (hi - lo))
    return out


def step(state: State, params: dict, rng: RngStream) -> State:
    n, D = state.n, state.dim
    P = best_so_far(state)
    r1 = r1_schedule(params["a"], min(state.t, state.T), state.T)
    r2 = 2.0 * np.pi * rng.random((n, D))
    r3 = 2.0 * rng.random((n, D))
    r4 = rng.random((n, D))
    Xn = state.repair(sca_update(state.X, P, r1, r2, r3, r4), rng)
    state.X[:] = Xn
    state.f[:] = state.evaluate(Xn)

    chosen = np.flatnonzero(rng.random(n) < params["Pc"])
    if chosen.size:
        kind = rng.integers(0, N_AUX, size=chosen.size)
        P = best_so_far(state)
        C = state.repair(_auxiliary(state, chosen, kind, P, params, rng), rng)
        fc = state.evaluate(C)
        better = fc <= state.f[chosen]
        state.X[chosen[better]] = C[better]
        state.f[chosen[better]] = fc[better]
    return state


SPEC = AlgorithmSpec(
    id="msca", name="Multi-strategy Sine Cosine Algorithm", tags=("physics-chemistry",),
    params=(
        integer("pop_size", 30, 4, 500),
        real("Pc", 0.8, 0.0, 1.0, "probability of an auxiliary operator"),
        real("a", 2.0, 0.0, 4.0, "initial amplitude of r1"),
        real("mu", 4.0, 3.0, 4.0, "logistic-map parameter"),
    ),
    init=init, step=step,
    generation_cost=lambda p, d: 2 * int(p["pop_size"]),
)
