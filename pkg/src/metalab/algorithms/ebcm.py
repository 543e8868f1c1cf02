"""Butterfly-optimizer modification phase: criss-cross and toward-best moves.

The population is split into two halves ``X1`` and ``X2``.  Each member
draws one of the two moves; the base and best vectors come from its own
half, the second difference vector from the pooled population plus an
archive of replaced parents.  F and CR are adapted with a success-history
memory of size ``H``.  The covariance-matrix retreat phase is not part of
this implementation, so ``prob_ls`` and ``sigma`` are accepted but unused.
"""
from __future__ import annotations

import numpy as np

from ..core import ConfigError, State, greedy
from ..rng import RngStream
from .base import AlgorithmSpec, integer, population_init, real
from .de import binomial


def criss_cross(x_cc: np.ndarray, x_r1: np.ndarray, x_r2: np.ndarray, F) -> np.ndarray:
    return x_cc + F * (x_r1 - x_r2)


def toward_best(x_best: np.ndarray, x_cc: np.ndarray, x_r2: np.ndarray, F) -> np.ndarray:
    return x_best + F * (x_cc - x_r2)


def init(space, obj, params, rng, T):
    n = int(params["pop_size"])
    if n < 4:
        raise ConfigError("EBCM needs pop_size >= 4 so both halves hold two members")
    state = population_init(space, obj, n, rng, T)
    H = int(params["H"])
    state.aux.update(MF=np.full(H, 0.5), MCR=np.full(H, 0.5), k=0,
                     archive=np.empty((0, space.dim)))
    return state


def _halves(n: int) -> tuple[np.ndarray, np.ndarray]:
    h = n // 2
    return np.arange(h), np.arange(h, n)


def _sample_F(mf: np.ndarray, rng: RngStream) -> np.ndarray:
    F = mf + 0.1 * rng.cauchy(mf.shape)
    for _ in range(20):
        bad = F <= 0
        if not bad.any():
            break
        F = np.where(bad, mf + 0.1 * rng.cauchy(mf.shape), F)
    return np.clip(np.where(F <= 0, 1e-3, F), 0.0, 1.0)


def _pick_other(rng: RngStream, size: int, exclude: list[np.ndarray]) -> np.ndarray:
    """One index in ``range(size)`` per row avoiding the excluded indices."""
    n = exclude[0].shape[0]
    out = rng.integers(0, size, size=n)
    for _ in range(100):
        clash = np.zeros(n, dtype=bool)
        for ex in exclude:
            clash |= out == ex
        if not clash.any():
            return out
        out[clash] = rng.integers(0, size, size=int(clash.sum()))
    raise ConfigError("could not draw distinct partners")


def step(state: State, params: dict, rng: RngStream) -> State:
    X, f, n, D = state.X, state.f, state.n, state.dim
    aux = state.aux
    if n < 4:
        raise ConfigError("EBCM needs two members in each half")
    H = len(aux["MF"])
    mem = rng.integers(0, H, size=n)
    F = np.full(n, float(params["F"])) if params.get("F") is not None else _sample_F(aux["MF"][mem], rng)
    CR = np.clip(aux["MCR"][mem] + 0.1 * rng.normal(n), 0.0, 1.0)

    pool = np.vstack([X, aux["archive"]]) if len(aux["archive"]) else X
    idx = np.arange(n)
    V = np.empty_like(X)
    for half in _halves(n):
        m = len(half)
        local = np.arange(m)
        best = half[int(np.argmin(f[half]))]
        r1 = half[_pick_other(rng, m, [local])]
        r2 = _pick_other(rng, len(pool), [half, r1])
        use_cc = rng.random(m) < 0.5
        Fz = F[half, None]
        V[half] = np.where(use_cc[:, None],
                           criss_cross(X[half], X[r1], pool[r2], Fz),
                           toward_best(X[best], X[half], pool[r2], Fz))
    U = binomial(X, V, CR[:, None], rng.random((n, D)), rng.integers(0, D, size=n))
    U = state.repair(U, rng)
    fu = state.evaluate(U)

    improved = fu < f
    old_X, gain = X[improved].copy(), (f - fu)[improved]
    greedy(state, U, fu)
    if improved.any():
        cap = max(1, int(round(params["arch_rate"] * n)))
        arch = np.vstack([aux["archive"], old_X])
        if len(arch) > cap:
            arch = arch[np.sort(rng.permutation(len(arch))[:cap])]
        aux["archive"] = arch
        w = gain / gain.sum() if gain.sum() > 0 else np.full(len(gain), 1.0 / len(gain))
        sF, sCR = F[improved], CR[improved]
        k = aux["k"]
        aux["MF"][k] = np.sum(w * sF ** 2) / max(np.sum(w * sF), 1e-300)
        aux["MCR"][k] = np.sum(w * sCR)
        aux["k"] = (k + 1) % H
    return state


SPEC = AlgorithmSpec(
    id="ebcm", name="EBOwithCMAR (modification phase)", tags=("SIA-nonhuman",),
    params=(
        integer("pop_size", 50, 4, 500),
        real("prob_ls", 0.1, 0.0, 1.0, "retreat-phase probability (unused)"),
        real("sigma", 0.3, 0.0, 1.0, "retreat-phase step size (unused)"),
        real("arch_rate", 2.6, 1.0, 4.0, "archive size relative to the population"),
        integer("H", 6, 1, 20, "success-history memory size"),
    ),
    init=init, step=step, options={"F": None},
)
