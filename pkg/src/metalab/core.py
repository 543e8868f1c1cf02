"""Problem and population model, budget accounting and the generic loops.

Everything is minimization.  Optimizers plug into
:func:`run_population_loop` through an :class:`~metalab.algorithms.AlgorithmSpec`
whose ``init`` and ``step`` callables operate on a :class:`State`.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Callable, Protocol

import numpy as np

from .metrics import Recorder, RunTrace
from .rng import RngStream

REPAIR_POLICIES = ("clamp", "reflect", "resample")


class ConfigError(ValueError):
    """Invalid configuration: parameters, sizes, ids or budgets."""


class ContractError(RuntimeError):
    """An operation was called with inputs violating its precondition."""


class BudgetExhausted(RuntimeError):
    """The evaluation budget cannot cover the requested evaluations."""


class Problem(Protocol):
    space: "SearchSpace"
    known_optimum: float

    def evaluate_batch(self, X: np.ndarray) -> np.ndarray: ...


# ---------------------------------------------------------------------------
# data model
# ---------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class SearchSpace:
    """Axis-aligned box ``[lower, upper]`` in ``dim`` dimensions.

    Degenerate intervals (``lower[j] == upper[j]``) are accepted; they pin
    the coordinate.
    """

    dim: int
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float).reshape(-1)
        hi = np.asarray(self.upper, dtype=float).reshape(-1)
        if self.dim < 1:
            raise ConfigError(f"dim must be positive, got {self.dim}")
        if lo.size == 1 and self.dim > 1:
            lo = np.full(self.dim, lo[0])
        if hi.size == 1 and self.dim > 1:
            hi = np.full(self.dim, hi[0])
        if lo.size != self.dim or hi.size != self.dim:
            raise ConfigError("bounds length must equal dim")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ConfigError("bounds must be finite")
        if np.any(lo > hi):
            raise ConfigError("lower bound exceeds upper bound")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def box(cls, dim: int, low: float = -100.0, high: float = 100.0) -> "SearchSpace":
        return cls(dim, np.full(dim, float(low)), np.full(dim, float(high)))

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


@dataclass
class Individual:
    position: np.ndarray
    fitness: float | None = None

    @property
    def evaluated(self) -> bool:
        return self.fitness is not None


@dataclass
class Population:
    """Positions ``X`` (n, dim) and fitness ``f`` (NaN while unevaluated)."""

    X: np.ndarray
    f: np.ndarray
    generation: int = 0

    @classmethod
    def from_members(cls, members: list[Individual], generation: int = 0) -> "Population":
        dims = {len(m.position) for m in members}
        if len(dims) != 1:
            raise ContractError("all members must share one dim")
        X = np.array([m.position for m in members], dtype=float)
        f = np.array([np.nan if m.fitness is None else m.fitness for m in members])
        return cls(X, f, generation)

    @property
    def members(self) -> list[Individual]:
        return [Individual(x.copy(), None if np.isnan(v) else float(v))
                for x, v in zip(self.X, self.f)]

    @property
    def size(self) -> int:
        return self.X.shape[0]

    def __len__(self) -> int:
        return self.X.shape[0]


@dataclass
class Budget:
    max_evals: int
    used_evals: int = 0

    def __post_init__(self):
        if self.max_evals < 1:
            raise ConfigError(f"max_evals must be positive, got {self.max_evals}")

    @classmethod
    def for_dim(cls, dim: int, multiplier: int = 10000) -> "Budget":
        return cls(int(multiplier) * int(dim))

    @property
    def remaining(self) -> int:
        return self.max_evals - self.used_evals

    def consume(self, k: int = 1) -> None:
        if self.used_evals + k > self.max_evals:
            raise BudgetExhausted(
                f"{k} evaluations requested, {self.remaining} remaining")
        self.used_evals += k


# ---------------------------------------------------------------------------
# primitive operations
# ---------------------------------------------------------------------------
def init_population(space: SearchSpace, n: int, rng: RngStream) -> Population:
    """Uniform initial population; fitness left unevaluated."""
    if n < 1:
        raise ConfigError(f"population size must be at least 1, got {n}")
    U = rng.random((n, space.dim))
    X = space.lower + U * space.width
    return Population(X, np.full(n, np.nan), 0)


def evaluate(problem: Problem, ind: Individual, budget: Budget) -> float:
    """Evaluate one individual, caching its fitness and charging one evaluation."""
    budget.consume(1)
    value = float(problem.evaluate_batch(np.asarray(ind.position, dtype=float)[None, :])[0])
    ind.fitness = value
    return value


def repair_batch(space: SearchSpace, X: np.ndarray, policy: str = "clamp",
                 rng: RngStream | None = None) -> np.ndarray:
    """Bring every row of ``X`` inside ``space`` (returns a new array)."""
    X = np.asarray(X, dtype=float)
    lo, hi = space.lower, space.upper
    if policy == "clamp":
        return np.clip(X, lo, hi)
    if policy == "reflect":
        w = hi - lo
        safe = np.where(w > 0, w, 1.0)
        y = np.mod(X - lo, 2.0 * safe)
        y = np.where(y > safe, 2.0 * safe - y, y)
        out = np.where(w > 0, lo + y, lo)
        inside = (X >= lo) & (X <= hi)
        return np.where(inside, X, np.clip(out, lo, hi))
    if policy == "resample":
        if rng is None:
            raise ContractError("resample repair needs an rng")
        bad = (X < lo) | (X > hi)
        if not bad.any():
            return X.copy()
        fresh = lo + rng.random(X.shape) * (hi - lo)
        return np.where(bad, fresh, X)
    raise ConfigError(f"unknown repair policy {policy!r}")


def repair(space: SearchSpace, position: np.ndarray, policy: str = "clamp",
           rng: RngStream | None = None) -> np.ndarray:
    position = np.asarray(position, dtype=float)
    if position.shape != (space.dim,):
        raise ContractError(f"position length {position.shape} != dim {space.dim}")
    return repair_batch(space, position[None, :], policy, rng)[0]


# ---------------------------------------------------------------------------
# evaluation context
# ---------------------------------------------------------------------------
class Objective:
    """Budget-charging batch evaluator that tracks the best-so-far solution.

    Ties in best-so-far keep the earlier solution.
    """

    def __init__(self, problem: Problem, budget: Budget):
        self.problem = problem
        self.budget = budget
        self.best_f = np.inf
        self.best_x: np.ndarray | None = None

    def __call__(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[0] == 0:
            return np.empty(0)
        self.budget.consume(X.shape[0])
        f = np.asarray(self.problem.evaluate_batch(X), dtype=float)
        k = int(np.argmin(f))
        if f[k] < self.best_f:
            self.best_f = float(f[k])
            self.best_x = X[k].copy()
        return f


@dataclass
class State:
    """Mutable state of one population-based run.

    ``t`` counts completed generations (it is incremented before each
    step), ``T`` is the planned number of generations.  Algorithms keep
    their auxiliaries in ``aux``.
    """

    X: np.ndarray
    f: np.ndarray
    space: SearchSpace
    objective: Objective | None = None
    t: int = 0
    T: int = 1
    policy: str = "clamp"
    aux: dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def dim(self) -> int:
        return self.X.shape[1]

    @property
    def progress(self) -> float:
        """``t / T`` clipped to [0, 1] so schedules stay in range."""
        return min(max(self.t / self.T, 0.0), 1.0)

    def repair(self, X: np.ndarray, rng: RngStream | None = None) -> np.ndarray:
        return repair_batch(self.space, X, self.policy, rng)

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        if self.objective is None:
            raise ContractError("state has no objective attached")
        return self.objective(X)

    @property
    def best_index(self) -> int:
        return int(np.argmin(self.f))


def make_state(X: np.ndarray, f: np.ndarray | None = None, problem: Problem | None = None,
               space: SearchSpace | None = None, t: int = 0, T: int = 1,
               max_evals: int = 10 ** 9, policy: str = "clamp") -> State:
    """Build a state by hand, mostly for exercising single steps."""
    X = np.array(X, dtype=float)
    if space is None:
        space = problem.space if problem is not None else SearchSpace.box(X.shape[1])
    obj = Objective(problem, Budget(max_evals)) if problem is not None else None
    if f is None:
        f = obj(X) if obj is not None else np.full(X.shape[0], np.nan)
    return State(X, np.array(f, dtype=float), space, obj, t, T, policy)


def greedy(state: State, Xnew: np.ndarray, fnew: np.ndarray, strict: bool = False) -> np.ndarray:
    """Replace members whose candidate is no worse (``<`` when ``strict``)."""
    better = fnew < state.f if strict else fnew <= state.f
    state.X[better] = Xnew[better]
    state.f[better] = fnew[better]
    return better


# ---------------------------------------------------------------------------
# generic loops
# ---------------------------------------------------------------------------
def _planned_generations(budget: Budget, init_cost: int, gen_cost: int) -> int:
    return max(1, (budget.max_evals - budget.used_evals - init_cost) // max(gen_cost, 1))


def run_population_loop(algo, params: dict | None, problem: Problem, budget: Budget,
                        rng: RngStream, recorder: Recorder | None = None,
                        policy: str = "clamp") -> RunTrace:
    """Initialize, then step until the next generation would overrun ``budget``.

    Sub-streams ``"init"`` and ``"operators"`` are derived from ``rng`` so
    that instrumentation never perturbs the search.
    """
    if policy not in REPAIR_POLICIES:
        raise ConfigError(f"unknown repair policy {policy!r}")
    params = algo.validate(params or {})
    dim = problem.space.dim
    init_cost = algo.init_cost(params, dim)
    gen_cost = algo.generation_cost(params, dim)
    if init_cost > budget.remaining:
        raise ConfigError(
            f"budget of {budget.remaining} evaluations cannot cover initialization ({init_cost})")
    recorder = recorder if recorder is not None else Recorder()
    obj = Objective(problem, budget)
    T = _planned_generations(budget, init_cost, gen_cost)
    start = time.perf_counter()

    state = algo.init(problem.space, obj, params, rng.spawn("init"), T)
    state.policy = policy
    recorder.record(0, budget.used_evals, obj.best_f, state.X)
    ops = rng.spawn("operators")
    while budget.used_evals + gen_cost <= budget.max_evals:
        state.t += 1
        algo.step(state, params, ops)
        recorder.record(state.t, budget.used_evals, obj.best_f, state.X)
    return recorder.finish(obj.best_x, obj.best_f, problem.known_optimum,
                           budget.used_evals, time.perf_counter() - start)


def gaussian_generator(sigma: float, k: int = 1) -> Callable:
    """Candidate generator ``x + sigma * N(0, I)`` producing ``k`` neighbours."""

    def generate(x: np.ndarray, rng: RngStream) -> np.ndarray:
        return x[None, :] + sigma * rng.normal((k, x.size))

    return generate


def greedy_selector(x: np.ndarray, fx: float, C: np.ndarray, fc: np.ndarray):
    """Move to the best candidate when it is no worse than the incumbent."""
    j = int(np.argmin(fc))
    if fc[j] <= fx:
        return C[j].copy(), float(fc[j])
    return x, fx


def run_single_solution_loop(generator: Callable, selector: Callable, problem: Problem,
                             budget: Budget, rng: RngStream, x0: np.ndarray | None = None,
                             recorder: Recorder | None = None,
                             policy: str = "clamp") -> RunTrace:
    """Trajectory search: generate neighbours, select, repeat within budget."""
    space = problem.space
    recorder = recorder if recorder is not None else Recorder()
    obj = Objective(problem, budget)
    start = time.perf_counter()
    init_rng, ops = rng.spawn("init"), rng.spawn("operators")
    if x0 is None:
        x = init_population(space, 1, init_rng).X[0]
    else:
        x = repair(space, x0, policy, init_rng)
    fx = float(obj(x)[0])
    recorder.record(0, budget.used_evals, obj.best_f, x[None, :])
    gen = 0
    while True:
        C = repair_batch(space, generator(x, ops), policy, ops)
        if C.shape[0] < 1:
            raise ContractError("generator produced no candidates")
        if budget.used_evals + C.shape[0] > budget.max_evals:
            break
        fc = obj(C)
        x, fx = selector(x, fx, C, fc)
        gen += 1
        recorder.record(gen, budget.used_evals, obj.best_f, x[None, :])
    return recorder.finish(obj.best_x, obj.best_f, problem.known_optimum,
                           budget.used_evals, time.perf_counter() - start)
