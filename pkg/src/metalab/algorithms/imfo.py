"""Improved moth-flame optimization.

Flames are the best positions found so far, sorted by fitness; their
number shrinks linearly to one.  Each moth spirals around its flame with
a fitness-dependent weight ``w`` (held at one during the first ``P``
fraction of the run) and then undergoes a dynamic crossover with the
flame whose rate decays from 1 to 0.5.
"""
from __future__ import annotations

import numpy as np

from ..core import State
from ..rng import RngStream
from .base import AlgorithmSpec, integer, population_init, real


def weight(f_best, f_i) -> np.ndarray:
    """``|f_best / f_i|`` with ``w = 1`` where ``f_i = 0``."""
    f_best, f_i = np.asarray(f_best, dtype=float), np.asarray(f_i, dtype=float)
    safe = np.where(f_i == 0.0, 1.0, f_i)
    return np.where(f_i == 0.0, 1.0, np.abs(f_best / safe))


def spiral_update(D, b: float, t, w, flame, m_best) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim == 1:
        w = w[:, None]
    return D * np.exp(b * t) * np.cos(2.0 * np.pi * t) + w * flame + (1.0 - w) * m_best


def init(space, obj, params, rng, T):
    state = population_init(space, obj, int(params["pop_size"]), rng, T)
    order = np.argsort(state.f, kind="stable")
    state.aux.update(flames=state.X[order].copy(), flame_f=state.f[order].copy())
    return state


def step(state: State, params: dict, rng: RngStream) -> State:
    n, D = state.n, state.dim
    aux = state.aux
    flames, flame_f = aux["flames"], aux["flame_f"]
    n_flames = int(round(n - state.progress * (n - 1)))
    which = np.minimum(np.arange(n), max(n_flames, 1) - 1)
    F = flames[which]
    dist = np.abs(F - state.X)
    t = rng.uniform(-1.0, 1.0, (n, D))
    if state.progress <= params["P"]:
        w = np.ones(n)
    else:
        w = weight(flame_f[0], state.f)
    M = spiral_update(dist, params["b"], t, w, F, flames[0])
    cr = 1.0 - 0.5 * state.progress
    cross = rng.random((n, D)) <= cr
    M = state.repair(np.where(cross, M, F), rng)
    state.X[:] = M
    state.f[:] = state.evaluate(M)

    allX = np.vstack([flames, state.X])
    allf = np.concatenate([flame_f, state.f])
    order = np.argsort(allf, kind="stable")[:n]
    aux["flames"], aux["flame_f"] = allX[order].copy(), allf[order].copy()
    return state


SPEC = AlgorithmSpec(
    id="imfo", name="Improved Moth-Flame Optimization", tags=("SIA-nonhuman",),
    params=(
        integer("pop_size", 100, 2, 500),
        real("b", 1.0, 0.0, 5.0, "logarithmic spiral shape"),
        real("P", 0.5, 0.0, 1.0, "fraction of the run with w held at one"),
    ),
    init=init, step=step,
)
