"""Nonparametric comparison: Friedman ranks, Wilcoxon signed-rank, Nemenyi CD.

Scores are errors, lower is better.  In the signed-rank test ``R+`` is the
rank sum of pairs where the first sample is better (``a < b``) and ``R-``
the sum where the second is better.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy import stats as sps

from . import kernels
from .core import ConfigError


class InsufficientData(ValueError):
    """Too few informative observations for the requested test."""


@dataclass
class StatReport:
    test: str
    statistic: float
    p_value: float
    alpha: float
    significant: bool
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "significant" if self.significant else "not significant"


# ---------------------------------------------------------------------------
# Friedman
# ---------------------------------------------------------------------------
def rank_rows(matrix: np.ndarray) -> np.ndarray:
    """Per-row midranks (1 = lowest score)."""
    return sps.rankdata(np.asarray(matrix, dtype=float), axis=1, method="average")


def friedman(matrix, alpha: float = 0.05, iman_davenport: bool = False) -> StatReport:
    """Friedman test on a problems x algorithms matrix of scores.

    Returns the average rank per algorithm in ``details["ranks"]``.  With
    ``iman_davenport`` the F-distributed correction decides significance.
    """
    M = np.asarray(matrix, dtype=float)
    if M.ndim != 2:
        raise ConfigError("Friedman needs a 2-D matrix")
    N, k = M.shape
    if k < 3:
        raise ConfigError(f"Friedman needs at least 3 algorithms, got {k}; use Wilcoxon")
    if N < 2:
        raise ConfigError("Friedman needs at least 2 problems")
    if np.isnan(M).any():
        raise ConfigError("result matrix has missing cells")
    R = rank_rows(M).mean(axis=0)
    chi2 = 12.0 * N / (k * (k + 1)) * (np.sum(R ** 2) - k * (k + 1) ** 2 / 4.0)
    chi2 = max(float(chi2), 0.0)
    p = float(sps.chi2.sf(chi2, k - 1))
    details = {"ranks": R, "N": N, "k": k, "chi2": chi2, "chi2_p": p}
    stat = chi2
    if iman_davenport:
        denom = N * (k - 1) - chi2
        ff = math.inf if denom <= 0 else (N - 1) * chi2 / denom
        p = 0.0 if math.isinf(ff) else float(sps.f.sf(ff, k - 1, (k - 1) * (N - 1)))
        details.update(iman_davenport=ff, iman_davenport_p=p)
        stat = ff
    return StatReport("friedman", stat, min(max(p, 0.0), 1.0), alpha, p <= alpha, details)


def competition_positions(ranks: Sequence[float]) -> list[int]:
    """1-based positions where equal ranks share the best position (1, 2, 2, 4)."""
    r = np.asarray(ranks, dtype=float)
    return [int(np.sum(r < v)) + 1 for v in r]


# ---------------------------------------------------------------------------
# Wilcoxon signed-rank
# ---------------------------------------------------------------------------
def _exact_p(absranks: np.ndarray, w: float) -> float:
    """Two-sided exact p for ``min(R+, R-) = w`` given the rank magnitudes."""
    n = len(absranks)
    doubled = np.rint(2.0 * absranks).astype(int)
    if np.all(doubled % 2 == 0) and np.array_equal(np.sort(doubled // 2), np.arange(1, n + 1)):
        counts = kernels.signed_rank_counts(n)
        scale = 1
    else:
        top = int(doubled.sum())
        counts = np.zeros(top + 1)
        counts[0] = 1.0
        for r in doubled:
            counts[r:] = counts[r:] + counts[:-r]
        scale = 2
    limit = int(math.floor(w * scale + 1e-9))
    tail = counts[: limit + 1].sum() / counts.sum()
    return float(min(1.0, 2.0 * tail))


def wilcoxon_signed_rank(a, b, alpha: float = 0.05, method: str = "normal",
                         tie_correction: bool = False) -> StatReport:
    """Paired signed-rank test of ``a`` against ``b``.

    Zero differences are dropped and tied magnitudes get midranks.  The
    default p-value is the two-sided normal approximation of
    ``min(R+, R-)`` without continuity correction; ``method="exact"``
    enumerates the null distribution instead.
    """
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ConfigError("Wilcoxon needs two equal-length vectors")
    d = a - b
    d = d[d != 0.0]
    n = d.size
    if n < 5:
        raise InsufficientData(f"only {n} nonzero differences (need at least 5)")
    ranks = sps.rankdata(np.abs(d), method="average")
    r_plus = float(ranks[d < 0].sum())
    r_minus = float(ranks[d > 0].sum())
    w = min(r_plus, r_minus)
    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    if tie_correction:
        _, t = np.unique(ranks, return_counts=True)
        var -= np.sum(t ** 3 - t) / 48.0
    z = (w - mean) / math.sqrt(var) if var > 0 else 0.0
    if method == "normal":
        p = float(min(1.0, 2.0 * sps.norm.cdf(z)))
    elif method == "exact":
        p = _exact_p(ranks, w)
    else:
        raise ConfigError(f"unknown Wilcoxon method {method!r}")
    direction = "a_better" if r_plus > r_minus else "b_better" if r_minus > r_plus else "tie"
    details = {"r_plus": r_plus, "r_minus": r_minus, "n": n, "z": z, "direction": direction,
               "method": method}
    return StatReport("wilcoxon", w, p, alpha, p <= alpha, details)


# ---------------------------------------------------------------------------
# Nemenyi critical difference
# ---------------------------------------------------------------------------
# Studentized range quantiles q(1 - alpha; k, inf) divided by sqrt(2), k = 2..50.
Q_TABLE = {
    0.05: (1.960, 2.344, 2.569, 2.728, 2.850, 2.948, 3.031, 3.102, 3.164, 3.219, 3.268,
           3.313, 3.354, 3.391, 3.426, 3.458, 3.489, 3.517, 3.544, 3.569, 3.593, 3.616,
           3.637, 3.658, 3.678, 3.696, 3.714, 3.732, 3.749, 3.765, 3.780, 3.795, 3.810,
           3.824, 3.837, 3.850, 3.863, 3.876, 3.888, 3.899, 3.911, 3.922, 3.933, 3.943,
           3.954, 3.964, 3.973, 3.983, 3.992),
    0.10: (1.645, 2.052, 2.291, 2.460, 2.589, 2.693, 2.780, 2.855, 2.920, 2.978, 3.030,
           3.077, 3.120, 3.159, 3.196, 3.230, 3.261, 3.291, 3.319, 3.346, 3.371, 3.394,
           3.417, 3.439, 3.459, 3.479, 3.498, 3.516, 3.533, 3.550, 3.567, 3.582, 3.597,
           3.612, 3.626, 3.640, 3.653, 3.666, 3.679, 3.691, 3.703, 3.714, 3.726, 3.737,
           3.747, 3.758, 3.768, 3.778, 3.788),
}
Q_KMIN, Q_KMAX = 2, 50


def nemenyi_q(k: int, alpha: float = 0.05) -> float:
    key = _alpha_key(alpha)
    if not Q_KMIN <= k <= Q_KMAX:
        raise ConfigError(f"k={k} outside the tabulated range {Q_KMIN}..{Q_KMAX}")
    return Q_TABLE[key][k - Q_KMIN]


def _alpha_key(alpha: float) -> float:
    for key in Q_TABLE:
        if abs(alpha - key) < 1e-12:
            return key
    raise ConfigError(f"alpha must be one of {sorted(Q_TABLE)}, got {alpha}")


def nemenyi_cd(k: int, N: int, alpha: float = 0.05) -> float:
    """Critical difference ``q_alpha(k) sqrt(k (k + 1) / (6 N))``."""
    if N < 1:
        raise ConfigError("N must be positive")
    return nemenyi_q(k, alpha) * math.sqrt(k * (k + 1) / (6.0 * N))


def cd_groups(ranks: Sequence[float], cd: float) -> list[list[int]]:
    """Maximal runs of algorithms whose average-rank spread is at most ``cd``.

    ``ranks`` need not be sorted; groups hold original indices ordered by
    rank.  Runs contained in a larger run are dropped; an isolated
    algorithm forms its own group.
    """
    r = np.asarray(ranks, dtype=float)
    order = np.argsort(r, kind="stable")
    s = r[order]
    k = len(s)
    spans = []
    for i in range(k):
        j = i
        while j + 1 < k and s[j + 1] - s[i] <= cd + 1e-12:
            j += 1
        spans.append((i, j))
    groups, last_end = [], -1
    for i, j in spans:
        if j > last_end:
            groups.append([int(x) for x in order[i:j + 1]])
            last_end = j
    return groups
