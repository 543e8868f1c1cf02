"""Algorithm metadata: parameter declarations and the AlgorithmSpec record."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from ..core import ConfigError, Objective, SearchSpace, State, init_population
from ..rng import RngStream

TAXONOMY = ("EA", "SIA-human", "SIA-nonhuman", "physics-chemistry")


@dataclass(frozen=True)
class Param:
    """One tunable parameter.

    ``kind`` is ``"real"``, ``"integer"`` or ``"categorical"``; numeric
    parameters carry inclusive ``low``/``high`` bounds, categorical ones a
    ``choices`` tuple.
    """

    name: str
    kind: str
    default: Any
    low: float | None = None
    high: float | None = None
    choices: tuple = ()
    doc: str = ""

    def check(self, value):
        if self.kind == "categorical":
            if value not in self.choices:
                raise ConfigError(
                    f"parameter {self.name!r}: {value!r} not in {list(self.choices)}")
            return value
        try:
            num = float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"parameter {self.name!r}: {value!r} is not numeric") from None
        if self.kind == "integer":
            if not float(num).is_integer():
                raise ConfigError(f"parameter {self.name!r}: {value!r} is not an integer")
            num = int(num)
        if not math.isfinite(num) or num < self.low or num > self.high:
            raise ConfigError(
                f"parameter {self.name!r}: {value!r} outside [{self.low}, {self.high}]")
        return num

    def describe(self) -> str:
        if self.kind == "categorical":
            dom = "{" + ", ".join(map(str, self.choices)) + "}"
        else:
            dom = f"[{self.low:g}, {self.high:g}]"
        return f"{self.name} ({self.kind}) {dom} default={self.default}"


def real(name, default, low, high, doc=""):
    return Param(name, "real", default, float(low), float(high), doc=doc)


def integer(name, default, low, high, doc=""):
    return Param(name, "integer", default, int(low), int(high), doc=doc)


def categorical(name, default, choices, doc=""):
    return Param(name, "categorical", default, choices=tuple(choices), doc=doc)


def _cost(value):
    if callable(value):
        return value
    return lambda params, dim: int(value)


@dataclass
class AlgorithmSpec:
    """Optimizer identity, tunable parameters and the loop callables.

    ``options`` holds non-tunable switches (name -> default) that are
    accepted by :meth:`validate` but are not part of the parameter space.
    """

    id: str
    name: str
    tags: tuple[str, ...]
    params: tuple[Param, ...]
    init: Callable | None = None
    step: Callable | None = None
    init_cost: Callable = field(default=lambda params, dim: int(params["pop_size"]))
    generation_cost: Callable = field(default=lambda params, dim: int(params["pop_size"]))
    implemented: bool = True
    presets: dict[int, dict] = field(default_factory=dict)
    options: dict[str, Any] = field(default_factory=dict)
    note: str = ""

    def __post_init__(self):
        self.init_cost = _cost(self.init_cost)
        self.generation_cost = _cost(self.generation_cost)
        for tag in self.tags:
            if tag not in TAXONOMY:
                raise ValueError(f"unknown taxonomy tag {tag!r}")

    @property
    def param_names(self) -> list[str]:
        return [p.name for p in self.params]

    def param(self, name: str) -> Param:
        for p in self.params:
            if p.name == name:
                return p
        raise ConfigError(f"{self.id} has no parameter {name!r}")

    def defaults(self) -> dict:
        out = {p.name: p.default for p in self.params}
        out.update(self.options)
        return out

    def validate(self, params: dict | None = None) -> dict:
        """Defaults overlaid with ``params``; raises ConfigError on bad input."""
        if not self.implemented:
            raise ConfigError(f"algorithm {self.id!r} is listed for reference only "
                              "and is not implemented")
        out = self.defaults()
        for key, value in (params or {}).items():
            if key in self.options:
                out[key] = value
                continue
            out[key] = self.param(key).check(value)
        return out

    def preset(self, dim: int | None = None, name: str = "default") -> dict:
        if name == "default":
            return self.defaults()
        if name == "tuned":
            if dim not in self.presets:
                raise ConfigError(f"no tuned preset for {self.id} at dim {dim}")
            return self.validate(self.presets[dim])
        raise ConfigError(f"unknown preset {name!r}")


def population_init(space: SearchSpace, obj: Objective, n: int, rng: RngStream,
                    T: int) -> State:
    """Uniform population evaluated once; the common initialization."""
    pop = init_population(space, n, rng)
    f = obj(pop.X)
    return State(pop.X, f, space, obj, 0, T)


def simple_init(size_key: str = "pop_size"):
    def init(space, obj, params, rng, T):
        return population_init(space, obj, int(params[size_key]), rng, T)
    return init


def partners(rng: RngStream, n: int, k: int) -> np.ndarray:
    """``(n, k)`` partner indices, distinct within a row and excluding the row."""
    return rng.distinct_rows(n, k)


def best_so_far(state: State) -> np.ndarray:
    """Best position seen in the run (population best when unavailable)."""
    obj = state.objective
    if obj is not None and obj.best_x is not None and obj.best_f <= state.f.min():
        return obj.best_x.copy()
    return state.X[state.best_index].copy()
