"""Seeded random streams.

Every stochastic symbol in the optimizers draws from an :class:`RngStream`.
Streams are backed by numpy's PCG64 bit generator, whose output for a
given seed is identical on every platform numpy supports.

Sub-streams are derived with :func:`mix64`, a splitmix64-style avalanche
over ``(seed, label)``; adding a new consumer with a new label never shifts
the draws of existing consumers.
"""
from __future__ import annotations

import math

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def fnv1a64(text: str) -> int:
    """64-bit FNV-1a hash of the UTF-8 bytes of ``text``."""
    h = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        h ^= byte
        h = (h * 0x100000001B3) & MASK64
    return h


def mix64(seed: int, *parts: int | str) -> int:
    """Fold ``parts`` into ``seed`` with a splitmix64 avalanche per part.

    Strings are hashed with FNV-1a first; integers are taken modulo 2**64.
    The result is a 64-bit unsigned integer.
    """
    h = _splitmix64(int(seed) & MASK64)
    for part in parts:
        v = fnv1a64(part) if isinstance(part, str) else int(part) & MASK64
        h = _splitmix64(h ^ v)
    return h


def mantegna_sigma(beta: float) -> float:
    num = math.gamma(1.0 + beta) * math.sin(math.pi * beta / 2.0)
    den = math.gamma((1.0 + beta) / 2.0) * beta * 2.0 ** ((beta - 1.0) / 2.0)
    return (num / den) ** (1.0 / beta)


class RngStream:
    """Deterministic stream of uniform, integer, normal and Levy draws."""

    def __init__(self, seed: int):
        self.seed = int(seed) & MASK64
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(seed={self.seed})"

    def spawn(self, label: str | int) -> "RngStream":
        return RngStream(mix64(self.seed, label))

    # continuous draws ------------------------------------------------------
    def random(self, size=None):
        """Uniform draws on [0, 1)."""
        return self._gen.random(size)

    def uniform(self, low, high, size=None):
        return low + (np.asarray(high) - low) * self.random(size)

    def normal(self, size=None):
        return self._gen.standard_normal(size)

    def cauchy(self, size=None):
        return self._gen.standard_cauchy(size)

    def levy(self, beta: float = 1.5, size=None):
        """Levy-stable steps by Mantegna's construction."""
        u = self.normal(size) * mantegna_sigma(beta)
        v = self.normal(size)
        return u / np.abs(v) ** (1.0 / beta)

    # discrete draws --------------------------------------------------------
    def integers(self, low, high=None, size=None):
        return self._gen.integers(low, high, size=size)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def distinct(self, n: int, k: int, exclude: int | None = None) -> np.ndarray:
        """``k`` distinct indices from ``range(n)``, none equal to ``exclude``."""
        pool = np.arange(n) if exclude is None else np.delete(np.arange(n), exclude)
        if k > len(pool):
            raise ValueError(f"cannot draw {k} distinct indices from {len(pool)}")
        return self._gen.choice(pool, size=k, replace=False)

    def distinct_rows(self, n: int, k: int) -> np.ndarray:
        """For each row ``i`` of ``n``, ``k`` distinct indices excluding ``i``.

        Returns an ``(n, k)`` integer array.
        """
        if k > n - 1:
            raise ValueError(f"cannot draw {k} distinct partners among {n}")
        keys = self._gen.random((n, n))
        np.fill_diagonal(keys, np.inf)
        return np.argsort(keys, axis=1, kind="stable")[:, :k]


class ConstantRng(RngStream):
    """Stream whose continuous draws are fixed constants.

    Used to check update equations with chosen values: every uniform,
    normal, Cauchy and Levy draw returns the configured constant.  Index
    draws (``integers``, ``permutation``, ``distinct*``) still come from a
    real seeded generator so partner selection stays valid.
    """

    def __init__(self, uniform: float = 0.0, normal: float = 0.0, levy: float = 0.0,
                 cauchy: float = 0.0, seed: int = 0):
        super().__init__(seed)
        self.u, self.n, self.l, self.c = uniform, normal, levy, cauchy

    def spawn(self, label):
        return ConstantRng(self.u, self.n, self.l, self.c, mix64(self.seed, label))

    @staticmethod
    def _fill(value, size):
        if size is None:
            return float(value)
        return np.full(size, float(value))

    def random(self, size=None):
        return self._fill(self.u, size)

    def normal(self, size=None):
        return self._fill(self.n, size)

    def cauchy(self, size=None):
        return self._fill(self.c, size)

    def levy(self, beta: float = 1.5, size=None):
        return self._fill(self.l, size)
