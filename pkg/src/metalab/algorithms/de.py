"""Differential evolution: six mutation strategies, two crossovers, ``<=`` selection."""
from __future__ import annotations

import numpy as np

from ..core import ConfigError, ContractError, Individual, Population, State, greedy
from ..rng import RngStream
from .base import AlgorithmSpec, categorical, integer, real, simple_init

STRATEGIES = ("rand/1", "best/1", "best/2", "rand/2", "target-to-best/1", "current-to-rand/1")
N_PARTNERS = {"rand/1": 3, "best/1": 2, "best/2": 4, "rand/2": 5,
              "target-to-best/1": 2, "current-to-rand/1": 3}
MIN_POP = 6


def mutant(strategy: str, X: np.ndarray, i, r: np.ndarray, F: float, best: int) -> np.ndarray:
    """Mutant vector(s) for target index ``i`` with partner indices ``r``.

    ``i`` may be an index array, in which case ``r`` is ``(len(i), k)``.
    """
    r = np.asarray(r)
    xr = [X[r[..., k]] for k in range(r.shape[-1])]
    xb, xi = X[best], X[i]
    if strategy == "rand/1":
        return xr[0] + F * (xr[1] - xr[2])
    if strategy == "best/1":
        return xb + F * (xr[0] - xr[1])
    if strategy == "best/2":
        return xb + F * (xr[0] - xr[1]) + F * (xr[2] - xr[3])
    if strategy == "rand/2":
        return xr[0] + F * (xr[1] - xr[2]) + F * (xr[3] - xr[4])
    if strategy == "target-to-best/1":
        return xi + F * (xb - xi) + F * (xr[0] - xr[1])
    if strategy == "current-to-rand/1":
        return xi + F * (xr[0] - xi) + F * (xr[1] - xr[2])
    raise ConfigError(f"unknown DE strategy {strategy!r}")


def de_mutate(strategy: str, pop: Population, i: int, F: float, rng: RngStream) -> np.ndarray:
    """Mutant for member ``i`` with freshly drawn distinct partners (before repair)."""
    if strategy not in STRATEGIES:
        raise ConfigError(f"unknown DE strategy {strategy!r}")
    if pop.size < MIN_POP:
        raise ConfigError(f"DE needs a population of at least {MIN_POP}, got {pop.size}")
    r = rng.distinct(pop.size, N_PARTNERS[strategy], exclude=i)
    best = int(np.nanargmin(pop.f)) if not np.all(np.isnan(pop.f)) else 0
    return mutant(strategy, pop.X, i, r, F, best)


def binomial(target: np.ndarray, v: np.ndarray, CR: float, u: np.ndarray,
             jrand) -> np.ndarray:
    """Binomial crossover given uniform draws ``u`` and forced index ``jrand``."""
    target, v = np.asarray(target), np.asarray(v)
    mask = u <= CR
    if target.ndim == 1:
        mask = mask.copy()
        mask[jrand] = True
    else:
        mask[np.arange(target.shape[0]), jrand] = True
    return np.where(mask, v, target)


def exponential(target: np.ndarray, v: np.ndarray, l: int, L: int) -> np.ndarray:
    """Copy the circular run ``l, l+1, ..., l+L-1 (mod D)`` from the mutant."""
    target = np.asarray(target, dtype=float)
    D = target.shape[-1]
    idx = (l + np.arange(L)) % D
    out = target.copy()
    out[..., idx] = np.asarray(v)[..., idx]
    return out


def exponential_length(CR: float, u: np.ndarray) -> int:
    """Run length: keep extending while successive uniform draws are < CR."""
    L = 1
    for val in u:
        if val >= CR:
            break
        L += 1
    return min(L, len(u) + 1)


def de_crossover(mode: str, target: np.ndarray, v: np.ndarray, CR: float,
                 rng: RngStream) -> np.ndarray:
    target, v = np.asarray(target, dtype=float), np.asarray(v, dtype=float)
    if target.shape != v.shape:
        raise ContractError("target and mutant lengths differ")
    D = target.shape[-1]
    if mode == "binomial":
        return binomial(target, v, CR, rng.random(D), int(rng.integers(0, D)))
    if mode == "exponential":
        l = int(rng.integers(0, D))
        L = exponential_length(CR, rng.random(D - 1))
        return exponential(target, v, l, L)
    raise ConfigError(f"unknown crossover {mode!r}")


def de_select(target: Individual, trial: Individual) -> Individual:
    """Trial survives iff ``f(trial) <= f(target)``."""
    if not (target.evaluated and trial.evaluated):
        raise ContractError("selection needs two evaluated individuals")
    return trial if trial.fitness <= target.fitness else target


def step(state: State, params: dict, rng: RngStream) -> State:
    X, n, D = state.X, state.n, state.dim
    strategy, F, CR = params["strategy"], params["F"], params["CR"]
    if n < MIN_POP:
        raise ConfigError(f"DE needs a population of at least {MIN_POP}, got {n}")
    r = rng.distinct_rows(n, N_PARTNERS[strategy])
    idx = np.arange(n)
    V = mutant(strategy, X, idx, r, F, state.best_index)
    if params["crossover"] == "binomial":
        U = binomial(X, V, CR, rng.random((n, D)), rng.integers(0, D, size=n))
    else:
        U = np.empty_like(X)
        for i in range(n):
            U[i] = exponential(X[i], V[i], int(rng.integers(0, D)),
                               exponential_length(CR, rng.random(D - 1)))
    U = state.repair(U, rng)
    greedy(state, U, state.evaluate(U))
    return state


SPEC = AlgorithmSpec(
    id="de", name="Differential Evolution", tags=("EA",),
    params=(
        integer("pop_size", 50, MIN_POP, 500),
        real("F", 0.5, 0.0, 1.0, "scaling factor"),
        real("CR", 0.9, 0.0, 1.0, "crossover rate"),
        categorical("strategy", "rand/1", STRATEGIES),
        categorical("crossover", "binomial", ("binomial", "exponential")),
    ),
    init=simple_init(), step=step,
)
