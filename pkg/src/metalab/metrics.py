"""Run instrumentation: convergence, population diversity and XPL/XPT.

Diversity is the mean absolute deviation of each coordinate from its
population median, averaged over dimensions.  XPL% and XPT% compare the
current diversity with the running maximum reached so far in the run.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


def diversity(X: np.ndarray) -> float:
    """Mean over dimensions of ``mean_i |median(x^j) - x_i^j|``.

    ``np.median`` averages the two central order statistics for even n.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[0] == 0:
        raise ValueError("diversity of an empty population")
    med = np.median(X, axis=0)
    return float(np.mean(np.abs(X - med)))


def xpl_xpt(div_t: float, div_max: float) -> tuple[float, float]:
    """Exploration and exploitation percentages.

    A run whose maximum diversity is zero is reported as fully
    exploitative, ``(0, 100)``.
    """
    if div_max <= 0.0:
        return 0.0, 100.0
    return 100.0 * div_t / div_max, 100.0 * abs(div_t - div_max) / div_max


@dataclass
class RunTrace:
    """Per-generation series plus the final result of one run."""

    gen: list[int] = field(default_factory=list)
    evals: list[int] = field(default_factory=list)
    best: list[float] = field(default_factory=list)
    div: list[float] = field(default_factory=list)
    xpl: list[float] = field(default_factory=list)
    xpt: list[float] = field(default_factory=list)
    best_x: np.ndarray | None = None
    best_f: float = math.inf
    f_star: float = 0.0
    used_evals: int = 0
    wall_time: float = 0.0

    @property
    def error(self) -> float:
        return self.best_f - self.f_star

    def records(self):
        for row in zip(self.gen, self.evals, self.best, self.div, self.xpl, self.xpt):
            yield dict(zip(("gen", "evals", "best", "div", "xpl", "xpt"), row))

    def to_jsonl(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for rec in self.records():
                fh.write(json.dumps(rec, separators=(",", ":")) + "\n")

    @classmethod
    def from_jsonl(cls, path: str | Path) -> "RunTrace":
        tr = cls()
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                rec = json.loads(line)
                for key in ("gen", "evals", "best", "div", "xpl", "xpt"):
                    getattr(tr, key).append(rec[key])
        return tr


class Recorder:
    """Collects a :class:`RunTrace` generation by generation.

    Parameters
    ----------
    stride : int
        Keep every ``stride``-th generation (the final one is always kept).
        Diversity is still computed every generation so the running
        maximum is exact.
    path : path-like, optional
        If given, the trace is written there as JSON Lines on ``finish``.
    """

    def __init__(self, stride: int = 1, path: str | Path | None = None):
        if stride < 1:
            raise ValueError("stride must be >= 1")
        self.stride = stride
        self.path = path
        self.trace = RunTrace()
        self.div_max = 0.0
        self._pending = None

    def record(self, gen: int, evals: int, best: float, X: np.ndarray) -> None:
        div = diversity(X)
        self.div_max = max(self.div_max, div)
        xpl, xpt = xpl_xpt(div, self.div_max)
        row = (gen, evals, float(best), div, xpl, xpt)
        if gen % self.stride == 0:
            self._append(row)
            self._pending = None
        else:
            self._pending = row

    def _append(self, row) -> None:
        tr = self.trace
        for key, value in zip(("gen", "evals", "best", "div", "xpl", "xpt"), row):
            getattr(tr, key).append(value)

    def finish(self, best_x, best_f: float, f_star: float, used_evals: int,
               wall_time: float) -> RunTrace:
        if self._pending is not None:
            self._append(self._pending)
            self._pending = None
        tr = self.trace
        tr.best_x = None if best_x is None else np.asarray(best_x).copy()
        tr.best_f = float(best_f)
        tr.f_star = float(f_star)
        tr.used_evals = int(used_evals)
        tr.wall_time = float(wall_time)
        if self.path is not None:
            tr.to_jsonl(self.path)
        return tr


@dataclass(frozen=True)
class Summary:
    n: int
    mean: float
    std: float
    best: float
    worst: float
    median: float
    mean_xpl: float
    mean_xpt: float


def summarize(traces) -> Summary:
    """Aggregate final errors (fitness minus optimum) over runs.

    ``traces`` may be :class:`RunTrace` objects or plain final errors.
    XPL/XPT are averaged over generations within a run, then over runs.
    """
    traces = list(traces)
    if not traces:
        raise ValueError("summarize needs at least one trace")
    if isinstance(traces[0], RunTrace):
        errors = np.array([t.error for t in traces])
        xpl = [np.mean(t.xpl) for t in traces if t.xpl]
        xpt = [np.mean(t.xpt) for t in traces if t.xpt]
    else:
        errors = np.asarray(traces, dtype=float)
        xpl, xpt = [], []
    return Summary(
        n=len(errors),
        mean=float(np.mean(errors)),
        std=float(np.std(errors, ddof=1)) if len(errors) > 1 else 0.0,
        best=float(np.min(errors)),
        worst=float(np.max(errors)),
        median=float(np.median(errors)),
        mean_xpl=float(np.mean(xpl)) if xpl else math.nan,
        mean_xpt=float(np.mean(xpt)) if xpt else math.nan,
    )
