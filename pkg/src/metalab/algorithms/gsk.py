"""Gaining-sharing knowledge.

The population is sorted by fitness.  Each coordinate of each member is
assigned to the junior phase with probability ``D_junior / D`` where
``D_junior = ceil(D (1 - t/T)^K)``, otherwise to the senior phase, and a
phase update of that coordinate is adopted with probability ``k_r``.
The best member uses itself as its better neighbour and the worst uses
itself as its worse neighbour.
"""
from __future__ import annotations

import math

import numpy as np

from ..core import ConfigError, State, greedy
from ..rng import RngStream
from .base import AlgorithmSpec, integer, real, simple_init


def junior(xi, x_better, x_worse, xr, fi, fr, kf) -> np.ndarray:
    """Junior gaining-sharing update (``x_r`` pulls when it is better)."""
    fi, fr = np.asarray(fi, dtype=float), np.asarray(fr, dtype=float)
    toward = np.reshape(fi > fr, np.shape(fi) + (1,) * (np.ndim(xi) - np.ndim(fi)))
    gain = x_better - x_worse
    return np.where(toward, xi + kf * (gain + (xr - xi)), xi + kf * (gain + (xi - xr)))


def senior(xi, x_pbest, x_pworst, xm, xr, fi, fm, kf, symmetric: bool = False) -> np.ndarray:
    """Senior update; the second branch uses ``x_r`` unless ``symmetric``."""
    fi, fm = np.asarray(fi, dtype=float), np.asarray(fm, dtype=float)
    toward = np.reshape(fi > fm, np.shape(fi) + (1,) * (np.ndim(xi) - np.ndim(fi)))
    gain = x_pbest - x_pworst
    away = xm if symmetric else xr
    return np.where(toward, xi + kf * (gain + (xm - xi)), xi + kf * (gain + (xi - away)))


def junior_dims(D: int, progress: float, K: float) -> int:
    return int(math.ceil(D * (1.0 - progress) ** K))


def _other(rng: RngStream, pool: np.ndarray, exclude: np.ndarray) -> np.ndarray:
    """One index from ``pool`` per row, avoiding ``exclude`` when possible."""
    pick = pool[rng.integers(0, len(pool), size=len(exclude))]
    if len(pool) > 1:
        for _ in range(100):
            clash = pick == exclude
            if not clash.any():
                break
            pick[clash] = pool[rng.integers(0, len(pool), size=int(clash.sum()))]
    return pick


def step(state: State, params: dict, rng: RngStream) -> State:
    n, D = state.n, state.dim
    if n < 3:
        raise ConfigError("GSK needs a population of at least 3")
    order = np.argsort(state.f, kind="stable")
    state.X[:] = state.X[order]
    state.f[:] = state.f[order]
    X, f = state.X, state.f
    kf, kr = params["k_f"], params["k_r"]
    idx = np.arange(n)

    better = np.maximum(idx - 1, 0)
    worse = np.minimum(idx + 1, n - 1)
    r = _other(rng, idx, idx)
    J = junior(X, X[better], X[worse], X[r], f, f[r], kf)

    p = max(1, int(round(params["P"] * n)))
    top, bottom = idx[:p], idx[n - p:]
    middle = idx[p:n - p] if n - 2 * p > 0 else idx
    pb = top[rng.integers(0, len(top), size=n)]
    pw = bottom[rng.integers(0, len(bottom), size=n)]
    m = _other(rng, middle, idx)
    S = senior(X, X[pb], X[pw], X[m], X[r], f, f[m], kf,
               bool(params.get("symmetric_senior", False)))

    d_jr = junior_dims(D, state.progress, params["K"])
    use_junior = rng.random((n, D)) <= d_jr / D
    adopt = rng.random((n, D)) <= kr
    C = np.where(adopt, np.where(use_junior, J, S), X)
    C = state.repair(C, rng)
    greedy(state, C, state.evaluate(C))
    return state


SPEC = AlgorithmSpec(
    id="gsk", name="Gaining-Sharing Knowledge-based algorithm", tags=("SIA-human",),
    params=(
        integer("pop_size", 100, 3, 500),
        real("P", 0.1, 0.01, 0.5, "fraction forming the best and worst pools"),
        real("k_f", 0.5, 0.0, 1.0, "knowledge factor"),
        real("k_r", 0.9, 0.0, 1.0, "knowledge ratio"),
        integer("K", 10, 1, 20, "knowledge rate"),
    ),
    init=simple_init(), step=step, options={"symmetric_senior": False},
)
