import math

import numpy as np
import pytest
from scipy import stats as sps

from metalab.core import ConfigError
from metalab.stats import (Q_TABLE, InsufficientData, cd_groups, competition_positions,
                           friedman, nemenyi_cd, nemenyi_q, wilcoxon_signed_rank)


# ---------------------------------------------------------------- Friedman
def test_friedman_rank_sum_k15():
    M = np.random.default_rng(0).random((30, 15))
    r = friedman(M).details["ranks"]
    assert r.sum() == pytest.approx(120.0, abs=1e-9)


def test_friedman_identical_columns():
    M = np.tile(np.arange(5.0)[:, None], (1, 4))
    rep = friedman(M)
    assert np.all(rep.details["ranks"] == 2.5)
    assert rep.p_value == 1.0 and not rep.significant


def test_friedman_strict_dominance():
    M = np.array([[1.0, 2.0, 3.0], [0.1, 0.5, 9.0], [4.0, 5.0, 6.0]])
    np.testing.assert_array_equal(friedman(M).details["ranks"], [1, 2, 3])


def test_friedman_matches_scipy():
    M = np.random.default_rng(4).random((12, 5))
    ref = sps.friedmanchisquare(*M.T)
    rep = friedman(M)
    assert rep.statistic == pytest.approx(ref.statistic, rel=1e-12)
    assert rep.p_value == pytest.approx(ref.pvalue, rel=1e-10)


def test_friedman_iman_davenport():
    M = np.random.default_rng(5).random((10, 4))
    M[:, 0] -= 1.0
    rep = friedman(M, iman_davenport=True)
    chi2, N, k = rep.details["chi2"], 10, 4
    ff = (N - 1) * chi2 / (N * (k - 1) - chi2)
    assert rep.statistic == pytest.approx(ff)
    assert rep.p_value == pytest.approx(sps.f.sf(ff, k - 1, (k - 1) * (N - 1)))


def test_friedman_errors():
    with pytest.raises(ConfigError, match="Wilcoxon"):
        friedman(np.zeros((5, 2)))
    with pytest.raises(ConfigError):
        friedman(np.array([[1.0, np.nan, 2.0], [1.0, 2.0, 3.0]]))


def test_competition_positions():
    assert competition_positions([1.5, 3.0, 1.5, 4.0]) == [1, 3, 1, 4]


# ---------------------------------------------------------------- Wilcoxon
def test_wilcoxon_one_signed_30():
    a, b = np.arange(30.0), np.arange(30.0) + 1.0 + np.arange(30) * 0.01
    rep = wilcoxon_signed_rank(a, b)
    assert (rep.details["r_plus"], rep.details["r_minus"]) == (465.0, 0.0)
    assert rep.p_value == pytest.approx(0.000002, abs=5e-7)


def test_wilcoxon_zero_dropped():
    rng = np.random.default_rng(1)
    a = rng.random(30)
    b = a + rng.normal(size=30)
    b[7] = a[7]
    rep = wilcoxon_signed_rank(a, b)
    assert rep.details["n"] == 29
    assert rep.details["r_plus"] + rep.details["r_minus"] == 435.0


def test_wilcoxon_all_equal():
    with pytest.raises(InsufficientData):
        wilcoxon_signed_rank(np.ones(10), np.ones(10))


def test_wilcoxon_symmetry():
    rng = np.random.default_rng(2)
    a, b = rng.random(20), rng.random(20)
    ab, ba = wilcoxon_signed_rank(a, b), wilcoxon_signed_rank(b, a)
    assert ab.details["r_plus"] == ba.details["r_minus"]
    assert ab.p_value == ba.p_value


@pytest.mark.parametrize("seed", range(5))
def test_wilcoxon_matches_scipy(seed):
    rng = np.random.default_rng(seed)
    a, b = rng.random(25), rng.random(25)
    rep = wilcoxon_signed_rank(a, b)
    ref = sps.wilcoxon(a, b, zero_method="wilcox", correction=False, method="approx")
    assert rep.statistic == ref.statistic
    assert rep.p_value == pytest.approx(ref.pvalue, rel=1e-10)
    ex = wilcoxon_signed_rank(a[:12], b[:12], method="exact")
    ref = sps.wilcoxon(a[:12], b[:12], method="exact")
    assert ex.p_value == pytest.approx(ref.pvalue, rel=1e-12)


def test_wilcoxon_tied_magnitudes_match_scipy():
    d = np.array([1.0, -1.0, 2.0, 2.0, -3.0, 4.0, 4.0, 4.0, 5.0, -6.0])
    rep = wilcoxon_signed_rank(d, np.zeros(10), tie_correction=True)
    ref = sps.wilcoxon(d, zero_method="wilcox", correction=False, method="approx")
    assert rep.p_value == pytest.approx(ref.pvalue, rel=1e-10)


def test_wilcoxon_bad_input():
    with pytest.raises(ConfigError):
        wilcoxon_signed_rank(np.ones(5), np.ones(6))
    with pytest.raises(ConfigError):
        wilcoxon_signed_rank(np.arange(6.0), np.zeros(6), method="bayes")


# ---------------------------------------------------------------- Nemenyi
def test_q_table_against_studentized_range():
    for alpha, row in Q_TABLE.items():
        for k in range(2, 51):
            q = sps.studentized_range.ppf(1 - alpha, k, 1e5) / math.sqrt(2)
            assert row[k - 2] == pytest.approx(q, abs=1e-3), (alpha, k)


def test_nemenyi_cd_k15():
    assert nemenyi_cd(15, 30) == pytest.approx(3.91, abs=0.02)
    assert nemenyi_cd(15, 30) == pytest.approx(3.391 * math.sqrt(15 * 16 / 180), rel=1e-12)


def test_nemenyi_small_k_and_limit():
    assert nemenyi_cd(2, 10) == pytest.approx(1.960 * math.sqrt(1 / 10))
    assert nemenyi_cd(5, 10 ** 9) < 1e-3


def test_nemenyi_errors():
    with pytest.raises(ConfigError):
        nemenyi_q(51)
    with pytest.raises(ConfigError):
        nemenyi_q(1)
    with pytest.raises(ConfigError):
        nemenyi_cd(5, 10, alpha=0.01)
    with pytest.raises(ConfigError):
        nemenyi_cd(5, 0)


def test_cd_groups_examples():
    assert cd_groups([1.0, 2.0, 10.0], 1.5) == [[0, 1], [2]]
    assert cd_groups([3.0, 3.0, 3.0], 0.1) == [[0, 1, 2]]
    assert cd_groups([1.0, 2.5], 1.5) == [[0, 1]]
    assert cd_groups([10.0, 1.0, 2.0], 1.5) == [[1, 2], [0]]


def test_cd_groups_drop_contained_runs():
    groups = cd_groups([1.0, 2.0, 3.0, 4.0], 2.0)
    assert groups == [[0, 1, 2], [1, 2, 3]]
