import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from metalab.metrics import Recorder, RunTrace, diversity, summarize, xpl_xpt


def test_diversity_degenerate_population():
    assert diversity(np.tile([3.0, -7.0, 1.5], (9, 1))) == 0.0
    assert diversity(np.array([[4.0, 2.0]])) == 0.0


def test_diversity_hand_value():
    # medians (2, 10); deviations (1, 0, 1) and (0, 0, 30)
    X = np.array([[1.0, 10.0], [2.0, 10.0], [3.0, 40.0]])
    assert diversity(X) == pytest.approx((2 / 3 + 30 / 3) / 2, rel=1e-15)


def test_diversity_even_population_uses_midpoint_median():
    assert diversity(np.array([[0.0], [2.0]])) == 1.0


def test_diversity_empty():
    with pytest.raises(ValueError):
        diversity(np.empty((0, 3)))


def test_xpl_xpt_examples():
    assert xpl_xpt(4.0, 4.0) == (100.0, 0.0)
    assert xpl_xpt(0.0, 4.0) == (0.0, 100.0)
    assert xpl_xpt(2.0, 4.0) == (50.0, 50.0)
    assert xpl_xpt(0.0, 0.0) == (0.0, 100.0)


@given(arrays(np.float64, st.tuples(st.integers(1, 8), st.integers(1, 4)),
              elements=st.floats(-1e3, 1e3, allow_nan=False)), st.integers(1, 20))
@settings(max_examples=100, deadline=None)
def test_recorder_percentages_sum_to_100(X0, gens):
    rec = Recorder()
    rng = np.random.default_rng(0)
    for g in range(gens):
        rec.record(g, g * 10, 1.0, X0 * rng.random())
    tr = rec.finish(None, 1.0, 0.0, gens * 10, 0.0)
    assert all(abs(a + b - 100.0) <= 1e-9 for a, b in zip(tr.xpl, tr.xpt))
    assert max(tr.xpl) == pytest.approx(100.0) or max(tr.div) == 0.0


def test_recorder_stride_keeps_last(tmp_path):
    rec = Recorder(stride=3, path=tmp_path / "t.jsonl")
    for g in range(8):
        rec.record(g, g, 8.0 - g, np.array([[0.0], [float(g)]]))
    tr = rec.finish(np.zeros(1), 1.0, 0.5, 8, 0.1)
    assert tr.gen == [0, 3, 6, 7]
    assert tr.error == 0.5
    back = RunTrace.from_jsonl(tmp_path / "t.jsonl")
    assert back.gen == tr.gen and back.xpl == tr.xpl
    with pytest.raises(ValueError):
        Recorder(stride=0)


def test_summarize_examples():
    s = summarize([1.0, 2.0, 3.0])
    assert (s.mean, s.median, s.best, s.worst, s.n) == (2.0, 2.0, 1.0, 3.0, 3)
    assert s.std == pytest.approx(1.0)
    assert math.isnan(s.mean_xpl)


def test_summarize_identical_traces():
    tr = RunTrace(gen=[0, 1], evals=[10, 20], best=[5.0, 4.0], div=[1.0, 0.5],
                  xpl=[100.0, 50.0], xpt=[0.0, 50.0], best_f=4.0, f_star=1.0)
    s = summarize([tr] * 31)
    assert s.n == 31 and s.std == 0.0 and s.mean == 3.0
    assert s.mean_xpl == 75.0 and s.mean_xpt == 25.0
    with pytest.raises(ValueError):
        summarize([])
