"""Simplified iterated racing.

Each iteration samples configurations from a per-parameter model
(truncated normal for numeric parameters, a probability vector for
categorical ones), races them together with the surviving elites over
the training instances, and moves the model toward the new elites.

Racing eliminates configurations after a Friedman test: once it is
significant, every configuration whose average rank exceeds the best by
more than the Nemenyi critical difference is dropped.  With two
survivors the signed-rank test is used instead.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np
from scipy.special import ndtr, ndtri

from .algorithms.base import AlgorithmSpec, Param
from .core import Budget, ConfigError, run_population_loop
from .rng import RngStream, mix64
from .stats import InsufficientData, friedman, nemenyi_cd, rank_rows, wilcoxon_signed_rank

SD_DECAY = 0.9
FIRST_TEST = 5
ELITES = 4
MAX_CONFIGS = 40   # keeps every race inside the tabulated Nemenyi range


# ---------------------------------------------------------------------------
# sampling model
# ---------------------------------------------------------------------------
@dataclass
class SamplingModel:
    """Per-parameter sampling distributions.

    ``numeric`` maps a name to ``(mean, sd)``; ``categorical`` maps a name
    to a probability vector aligned with the parameter's choices.  While
    ``uniform`` is set, numeric parameters are drawn uniformly.
    """

    numeric: dict[str, tuple[float, float]] = field(default_factory=dict)
    categorical: dict[str, np.ndarray] = field(default_factory=dict)
    uniform: bool = True


def initial_model(space: Sequence[Param]) -> SamplingModel:
    model = SamplingModel()
    for p in space:
        if p.kind == "categorical":
            if not p.choices:
                raise ConfigError(f"parameter {p.name!r} has no choices")
            model.categorical[p.name] = np.full(len(p.choices), 1.0 / len(p.choices))
        else:
            if not (math.isfinite(p.low) and math.isfinite(p.high)):
                raise ConfigError(f"parameter {p.name!r} needs finite bounds")
            model.numeric[p.name] = ((p.low + p.high) / 2.0, (p.high - p.low) / 2.0)
    return model


def _bounds(p: Param) -> tuple[float, float]:
    if p.kind == "integer":
        return p.low - 0.5, p.high + 0.5
    return p.low, p.high


def truncated_normal(mean: float, sd: float, lo: float, hi: float, u: float) -> float:
    """Inverse-CDF draw from N(mean, sd) truncated to [lo, hi]."""
    if sd <= 1e-12:
        return float(min(max(mean, lo), hi))
    a, b = ndtr((lo - mean) / sd), ndtr((hi - mean) / sd)
    if b - a < 1e-300:
        return float(min(max(mean, lo), hi))
    x = mean + sd * ndtri(a + u * (b - a))
    return float(min(max(x, lo), hi))


def _finish(p: Param, x: float):
    if p.kind == "integer":
        return int(min(max(round(x), p.low), p.high))
    return float(x)


def sample_configs(model: SamplingModel, space: Sequence[Param], k: int,
                   rng: RngStream) -> list[dict]:
    if k < 1:
        raise ConfigError("k must be at least 1")
    out = []
    for _ in range(k):
        cfg = {}
        for p in space:
            if p.kind == "categorical":
                probs = model.categorical[p.name]
                j = int(np.searchsorted(np.cumsum(probs), rng.random() * probs.sum(), side="right"))
                cfg[p.name] = p.choices[min(j, len(probs) - 1)]
                continue
            lo, hi = _bounds(p)
            if model.uniform:
                x = lo + rng.random() * (hi - lo)
            else:
                mean, sd = model.numeric[p.name]
                x = truncated_normal(mean, sd, lo, hi, rng.random())
            cfg[p.name] = _finish(p, x)
        out.append(cfg)
    return out


def update_model(model: SamplingModel, elites: Sequence[dict], space: Sequence[Param],
                 decay: float = SD_DECAY) -> SamplingModel:
    """Means move to the elite mean, sds shrink by ``decay``, categorical
    probabilities move halfway to the elite frequencies."""
    if not elites:
        raise ConfigError("update_model needs at least one elite")
    new = SamplingModel(uniform=False)
    for p in space:
        if p.kind == "categorical":
            freq = np.array([sum(e[p.name] == c for e in elites) for c in p.choices], dtype=float)
            freq /= freq.sum()
            probs = 0.5 * (model.categorical[p.name] + freq)
            new.categorical[p.name] = probs / probs.sum()
        else:
            _, sd = model.numeric[p.name]
            mean = float(np.mean([e[p.name] for e in elites]))
            new.numeric[p.name] = (min(max(mean, p.low), p.high), sd * decay)
    return new


# ---------------------------------------------------------------------------
# racing
# ---------------------------------------------------------------------------
@dataclass
class RaceState:
    configs: list[dict]
    alive: list[bool]
    scores: dict[tuple[int, int], float] = field(default_factory=dict)
    history: list[dict] = field(default_factory=list)
    evals_used: int = 0
    instances_seen: int = 0

    @property
    def survivors(self) -> list[int]:
        return [i for i, a in enumerate(self.alive) if a]

    def mean_score(self, i: int) -> float:
        vals = [v for (c, _), v in self.scores.items() if c == i]
        return float(np.mean(vals)) if vals else math.inf

    def ranking(self) -> list[int]:
        """Survivors ordered by average rank over the instances seen."""
        surv = self.survivors
        if self.instances_seen == 0 or len(surv) == 1:
            return surv
        M = np.array([[self.scores[(c, j)] for c in surv] for j in range(self.instances_seen)])
        R = rank_rows(M).mean(axis=0)
        order = np.lexsort((np.arange(len(surv)), M.mean(axis=0), R))
        return [surv[i] for i in order]


def race(configs: list[dict], instances: Sequence, evaluate: Callable, budget_per_eval: int,
         elimination_alpha: float = 0.05, rng: RngStream | None = None,
         max_evals: int | None = None, first_test: int = FIRST_TEST,
         log: list | None = None) -> RaceState:
    """Race ``configs`` over ``instances`` in order.

    ``evaluate(config, instance, seed)`` returns a score (lower is better)
    and optionally the evaluations it used as a second element.  Each
    evaluation is charged ``budget_per_eval`` unless it reports its own
    usage; the race stops before an instance block that cannot be paid.
    """
    if len(configs) < 2:
        raise ConfigError("a race needs at least two configurations")
    if not instances:
        raise ConfigError("a race needs at least one instance")
    if budget_per_eval <= 0 or (max_evals is not None and max_evals <= 0):
        raise ConfigError("tuning budget must be positive")
    rng = rng if rng is not None else RngStream(0)
    state = RaceState(list(configs), [True] * len(configs))
    for j, inst in enumerate(instances):
        surv = state.survivors
        if len(surv) <= 1:
            break
        if max_evals is not None and state.evals_used + len(surv) * budget_per_eval > max_evals:
            break
        seed = mix64(rng.seed, "instance", j)
        for c in surv:
            if (c, j) not in state.scores:
                out = evaluate(state.configs[c], inst, seed)
                score, used = (out if isinstance(out, tuple) else (out, budget_per_eval))
                state.scores[(c, j)] = float(score)
                state.evals_used += int(used)
                if log is not None:
                    log.append({"config": state.configs[c], "config_index": c, "instance": j,
                                "seed": seed, "score": float(score)})
        state.instances_seen = j + 1
        if state.instances_seen >= first_test:
            _eliminate(state, elimination_alpha)
    return state


def _eliminate(state: RaceState, alpha: float) -> None:
    surv = state.survivors
    N = state.instances_seen
    M = np.array([[state.scores[(c, j)] for c in surv] for j in range(N)])
    dropped: list[int] = []
    test = None
    if len(surv) >= 3:
        rep = friedman(M, alpha)
        test = {"test": "friedman", "p": rep.p_value}
        if rep.significant:
            R = rep.details["ranks"]
            cd = nemenyi_cd(len(surv), N, alpha)
            test["cd"] = cd
            dropped = [c for c, r in zip(surv, R) if r - R.min() > cd]
    elif len(surv) == 2:
        try:
            rep = wilcoxon_signed_rank(M[:, 0], M[:, 1], alpha)
        except InsufficientData:
            rep = None
        if rep is not None:
            test = {"test": "wilcoxon", "p": rep.p_value}
            if rep.significant:
                worse = surv[1] if rep.details["direction"] == "a_better" else surv[0]
                dropped = [worse]
    for c in dropped:
        state.alive[c] = False
    state.history.append({"instances": N, "survivors": len(surv), "dropped": dropped,
                          **(test or {})})


# ---------------------------------------------------------------------------
# tuning loop
# ---------------------------------------------------------------------------
@dataclass
class TuneResult:
    best: dict
    best_score: float
    evals_used: int
    iterations: int
    log: list[dict]
    races: list[dict]
    best_trace: list[float]


def _space_for(algo: AlgorithmSpec | None, space) -> list[Param]:
    if space is None:
        if algo is None:
            raise ConfigError("either an algorithm or a parameter space is required")
        return list(algo.params)
    out = []
    for p in space:
        if isinstance(p, Param):
            out.append(p)
        elif algo is not None:
            out.append(algo.param(p))
        else:
            raise ConfigError(f"cannot resolve parameter {p!r} without an algorithm")
    return out


def default_evaluator(algo: AlgorithmSpec, budget_per_eval: int, fixed: dict | None = None):
    """Score = final error of one run of ``algo`` on the instance."""

    def evaluate(config, problem, seed):
        params = dict(fixed or {})
        params.update(config)
        trace = run_population_loop(algo, params, problem, Budget(budget_per_eval),
                                    RngStream(seed))
        return trace.error, trace.used_evals

    return evaluate


def tune(algo: AlgorithmSpec | None, space, training_instances: Sequence, total_budget: int,
         rng: RngStream, evaluate: Callable | None = None, budget_per_eval: int | None = None,
         elimination_alpha: float = 0.05, n_iterations: int | None = None,
         fixed: dict | None = None, audit_path: str | Path | None = None) -> TuneResult:
    """Iterated racing over ``space`` (Param objects or names of ``algo``'s parameters).

    ``total_budget`` is counted in fitness evaluations; every race is
    capped so the total never exceeds it.
    """
    params = _space_for(algo, space)
    if not params:
        raise ConfigError("nothing to tune")
    if not training_instances:
        raise ConfigError("no training instances")
    if budget_per_eval is None:
        dim = getattr(training_instances[0], "dim", 10)
        budget_per_eval = 10000 * dim
    if evaluate is None:
        evaluate = default_evaluator(algo, budget_per_eval, fixed)
    n_inst = len(training_instances)
    min_race = 2 * min(n_inst, FIRST_TEST) * budget_per_eval
    if total_budget < min_race:
        raise ConfigError(
            f"total budget {total_budget} cannot pay for one race ({min_race} evaluations)")
    # planned iterations shape the budget split; racing continues past the
    # plan while the remaining budget still pays for a minimal race
    n_iter = n_iterations or int(2 + math.log2(max(len(params), 1)))
    max_iter = n_iterations or math.inf
    model = initial_model(params)
    elites: list[dict] = []
    log: list[dict] = []
    races: list[dict] = []
    used = 0
    best_cfg, best_score = None, math.inf
    best_trace: list[float] = []
    it = -1
    while it + 1 < max_iter:
        it += 1
        remaining = total_budget - used
        share = remaining // max(n_iter - it, 1)
        per_config = budget_per_eval * min(n_inst, FIRST_TEST + it)
        n_new = max(min(int(share // per_config), MAX_CONFIGS) - len(elites), 2 - len(elites), 1)
        if remaining < 2 * budget_per_eval:
            break
        it_rng = rng.spawn(f"iteration-{it}")
        configs = elites + sample_configs(model, params, n_new, it_rng.spawn("sample"))
        order = it_rng.permutation(n_inst)
        instances = [training_instances[k] for k in order]
        it_log: list[dict] = []
        st = race(configs, instances, evaluate, budget_per_eval, elimination_alpha,
                  it_rng.spawn("race"), max_evals=share, log=it_log)
        if st.instances_seen == 0:
            break
        used += st.evals_used
        for rec in it_log:
            rec["iteration"] = it
            rec["instance"] = int(order[rec["instance"]])
        log.extend(it_log)
        ranked = st.ranking()
        elites = [configs[c] for c in ranked[:ELITES]]
        top = ranked[0]
        score = st.mean_score(top)
        if score < best_score:
            best_cfg, best_score = configs[top], score
        best_trace.append(best_score)
        races.append({"iteration": it, "configs": len(configs), "evals": st.evals_used,
                      "history": st.history, "best": configs[top], "best_score": score})
        model = update_model(model, elites, params)
    if best_cfg is None:
        raise ConfigError("tuning budget too small for one race")
    result = TuneResult(best_cfg, best_score, used, len(races), log, races, best_trace)
    if audit_path is not None:
        write_audit(result, audit_path)
    return result


def _jsonable(x: Any):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(type(x))


def write_audit(result: TuneResult, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in result.log:
            fh.write(json.dumps({"kind": "evaluation", **rec}, default=_jsonable, sort_keys=True) + "\n")
        for rec in result.races:
            fh.write(json.dumps({"kind": "race", **rec}, default=_jsonable, sort_keys=True) + "\n")
        fh.write(json.dumps({"kind": "result", "best": result.best, "best_score": result.best_score,
                             "evals_used": result.evals_used}, default=_jsonable, sort_keys=True) + "\n")
