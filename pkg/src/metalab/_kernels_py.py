"""Pure numpy implementations of the hot kernels.

Function-for-function twin of ``_ckernels.pyx``; selected by
``metalab.kernels`` when the compiled module is unavailable.
"""
import math

import numpy as np

SPHERE, BENT_CIGAR, ZAKHAROV, ELLIPTIC, ROSENBROCK = 0, 1, 2, 3, 4
RASTRIGIN, ACKLEY, GRIEWANK, SCHWEFEL, LEVY = 5, 6, 7, 8, 9

SCHWEFEL_OPT = 420.9687462275036
SCHWEFEL_PEAK = 418.9828872724338


def _schwefel(Z):
    n, d = Z.shape
    g = np.empty_like(Z)
    hi = Z > 500.0
    lo = Z < -500.0
    mid = ~(hi | lo)
    zm = Z[mid]
    g[mid] = zm * np.sin(np.sqrt(np.abs(zm)))
    zh = Z[hi]
    r = 500.0 - np.fmod(zh, 500.0)
    g[hi] = r * np.sin(np.sqrt(r)) - ((zh - 500.0) / 100.0) ** 2 / d
    zl = Z[lo]
    r = np.fmod(np.abs(zl), 500.0)
    g[lo] = (r - 500.0) * np.sin(np.sqrt(500.0 - r)) - ((zl + 500.0) / 100.0) ** 2 / d
    return SCHWEFEL_PEAK * d - g.sum(axis=1)


def eval_base(code: int, Z: np.ndarray) -> np.ndarray:
    """Evaluate base function ``code`` on every row of ``Z``."""
    Z = np.ascontiguousarray(Z, dtype=np.float64)
    n, d = Z.shape
    if code == SPHERE:
        return np.einsum("ij,ij->i", Z, Z)
    if code == BENT_CIGAR:
        return Z[:, 0] ** 2 + 1e6 * np.einsum("ij,ij->i", Z[:, 1:], Z[:, 1:])
    if code == ZAKHAROV:
        s1 = np.einsum("ij,ij->i", Z, Z)
        s2 = Z @ (0.5 * np.arange(1, d + 1))
        return s1 + s2 ** 2 + s2 ** 4
    if code == ELLIPTIC:
        w = 1e6 ** (np.arange(d) / (d - 1)) if d > 1 else np.ones(1)
        return (Z * Z) @ w
    if code == ROSENBROCK:
        a, b = Z[:, :-1], Z[:, 1:]
        return (100.0 * (a * a - b) ** 2 + (a - 1.0) ** 2).sum(axis=1)
    if code == RASTRIGIN:
        return (Z * Z - 10.0 * np.cos(2.0 * np.pi * Z) + 10.0).sum(axis=1)
    if code == ACKLEY:
        s1 = np.einsum("ij,ij->i", Z, Z) / d
        s2 = np.cos(2.0 * np.pi * Z).sum(axis=1) / d
        return -20.0 * np.exp(-0.2 * np.sqrt(s1)) - np.exp(s2) + 20.0 + math.e
    if code == GRIEWANK:
        s = np.einsum("ij,ij->i", Z, Z) / 4000.0
        p = np.prod(np.cos(Z / np.sqrt(np.arange(1, d + 1))), axis=1)
        return 1.0 + s - p
    if code == SCHWEFEL:
        return _schwefel(Z)
    if code == LEVY:
        W = 1.0 + (Z - 1.0) / 4.0
        head = np.sin(np.pi * W[:, 0]) ** 2
        mid = ((W[:, :-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * W[:, :-1] + 1.0) ** 2)).sum(axis=1)
        wd = W[:, -1]
        tail = (wd - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * wd) ** 2)
        return head + mid + tail
    raise ValueError(f"unknown base function code {code}")


def social_force(X: np.ndarray, f: float = 0.5, l: float = 1.5) -> np.ndarray:
    """Grasshopper social interaction summed over partners.

    ``S[i, k] = sum_j s(2 + |x_jk - x_ik| mod 2) * (x_jk - x_ik) / d_ij``
    with ``s(r) = f exp(-r / l) - exp(-r)``; coincident pairs (``d_ij = 0``)
    contribute nothing.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    diff = X[None, :, :] - X[:, None, :]          # diff[i, j] = x_j - x_i
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    r = 2.0 + np.fmod(np.abs(diff), 2.0)
    s = f * np.exp(-r / l) - np.exp(-r)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(dist > 0.0, 1.0 / dist, 0.0)
    return np.einsum("ijk,ij->ik", s * diff, inv)


def gravity(X: np.ndarray, mass: np.ndarray, active: np.ndarray, weights: np.ndarray,
            G: float, eps: float = 2.220446049250313e-16) -> np.ndarray:
    """Gravitational acceleration on every agent from the ``active`` agents.

    ``A[i] = sum_{j active, j != i} weights[i, j] * G * mass[j] * (x_j - x_i) / (R_ij + eps)``
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    diff = X[None, :, :] - X[:, None, :]
    R = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    coef = weights * G * mass[None, :] / (R + eps)
    coef = coef * np.asarray(active, dtype=bool)[None, :]
    np.fill_diagonal(coef, 0.0)
    return np.einsum("ij,ijk->ik", coef, diff)


def signed_rank_counts(n: int) -> np.ndarray:
    """Number of sign patterns of ranks 1..n with each positive-rank sum."""
    top = n * (n + 1) // 2
    counts = np.zeros(top + 1)
    counts[0] = 1.0
    for r in range(1, n + 1):
        counts[r:] = counts[r:] + counts[:-r]
    return counts
