import sys

import numpy as np
import pytest

from metalab.core import SearchSpace


class CountingProblem:
    """Wraps a problem, counting every row it evaluates and keeping the batches."""

    def __init__(self, inner, keep: bool = False):
        self.inner = inner
        self.space = inner.space
        self.known_optimum = inner.known_optimum
        self.rows = 0
        self.keep = keep
        self.batches: list[np.ndarray] = []

    @property
    def optimizer(self):
        return self.inner.optimizer

    @property
    def dim(self):
        return self.space.dim

    def evaluate_batch(self, X):
        X = np.atleast_2d(X)
        self.rows += X.shape[0]
        if self.keep:
            self.batches.append(X.copy())
        return self.inner.evaluate_batch(X)


class FunctionProblem:
    """Plain callable on a box, for loops that need no transform."""

    def __init__(self, fn, dim, low=-100.0, high=100.0, f_star=0.0):
        self.fn = fn
        self.space = SearchSpace.box(dim, low, high)
        self.known_optimum = f_star
        self.optimizer = np.zeros(dim)

    def evaluate_batch(self, X):
        return np.array([self.fn(x) for x in np.atleast_2d(X)], dtype=float)


@pytest.fixture
def counting():
    return CountingProblem


@pytest.fixture
def function_problem():
    return FunctionProblem


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance lines at the end of the session."""
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
