import csv

import numpy as np
import pytest
from hypothesis import given, strategies as st

from footprint.errors import DegenerateLabels, LengthMismatch, MissingClass, SingleClass
from footprint.errors import UnknownLabel
from footprint.metrics import (accuracy, binary_auc, confusion, evaluate, roc_curve,
                               term_ideology_correlation, weighted_ovr_auc, write_correlations)
from footprint.models import LinearSVC, LogisticRegression

import oracles


def test_accuracy():
    assert accuracy(["a", "b", "b"], ["a", "b", "a"]) == pytest.approx(2 / 3)
    with pytest.raises(LengthMismatch):
        accuracy(["a"], ["a", "b"])


def test_auc_known_values():
    assert binary_auc([0.9, 0.8, 0.1, 0.2], [1, 1, 0, 0]) == 1.0
    assert binary_auc([0.1, 0.2, 0.9, 0.8], [1, 1, 0, 0]) == 0.0
    assert binary_auc([0.5, 0.5, 0.5, 0.5], [1, 0, 1, 0]) == 0.5
    with pytest.raises(SingleClass):
        binary_auc([0.1, 0.2], [1, 1])


def test_roc_curve_strict_threshold():
    r = roc_curve([0.9, 0.5, 0.5, 0.1], [1, 1, 0, 0])
    np.testing.assert_array_equal(r.thresholds, [0.9, 0.5, 0.1, -np.inf])
    # one point per threshold: rows scoring strictly above it are called positive
    np.testing.assert_allclose(r.tpr, [0, 0.5, 1, 1])
    np.testing.assert_allclose(r.fpr, [0, 0, 0.5, 1])


scores = st.lists(st.integers(0, 5), min_size=2, max_size=40)


@given(scores, st.data())
def test_auc_is_mann_whitney(s, data):
    pos = data.draw(st.lists(st.booleans(), min_size=len(s), max_size=len(s)))
    pos[0], pos[-1] = True, False
    assert binary_auc(np.array(s, float), pos) == float(oracles.mann_whitney(s, pos))


@given(scores, st.data())
def test_auc_invariant_to_monotone_transform(s, data):
    pos = data.draw(st.lists(st.booleans(), min_size=len(s), max_size=len(s)))
    pos[0], pos[-1] = True, False
    a = np.array(s, float)
    assert binary_auc(a, pos) == binary_auc(np.exp(a) * 3 + 1, pos)
    assert binary_auc(-a, pos) == pytest.approx(1 - binary_auc(a, pos), abs=1e-15)


def test_weighted_ovr_auc():
    y = np.array(["a", "a", "b", "c"])
    proba = np.array([[0.8, 0.1, 0.1], [0.6, 0.3, 0.1], [0.1, 0.7, 0.2], [0.3, 0.3, 0.4]])
    overall, per, prev = weighted_ovr_auc(proba, y, ["a", "b", "c"])
    assert per == {"a": 1.0, "b": 1.0, "c": 1.0} and overall == pytest.approx(1.0)
    assert prev == {"a": 0.5, "b": 0.25, "c": 0.25}
    with pytest.raises(MissingClass):
        weighted_ovr_auc(proba[:2], y[:2], ["a", "b", "c"])


def test_confusion():
    cm = confusion(["a", "b", "b", "c"], ["a", "c", "b", "c"], ["a", "b", "c"])
    np.testing.assert_array_equal(cm, [[1, 0, 0], [0, 1, 1], [0, 0, 1]])
    with pytest.raises(UnknownLabel):
        confusion(["a"], ["z"], ["a"])


def test_correlation_against_numpy():
    rng = np.random.default_rng(0)
    x = rng.random((30, 5)) * (rng.random((30, 5)) < 0.5)
    x[:, 4] = 0.0
    labels = list(rng.choice(["left", "center", "right"], 30))
    r = term_ideology_correlation(x, labels)
    yv = np.array([{"left": -1, "center": 0, "right": 1}[v] for v in labels])
    for j in range(4):
        assert r[j] == pytest.approx(np.corrcoef(x[:, j], yv)[0, 1], abs=1e-12)
    assert r[4] == 0.0
    with pytest.raises(DegenerateLabels):
        term_ideology_correlation(x, ["left"] * 30)
    with pytest.raises(UnknownLabel):
        term_ideology_correlation(x[:1], ["libleft"])


def test_write_correlations_order(tmp_path):
    p = tmp_path / "c.csv"
    write_correlations(p, ["aa", "bb", "cc"], np.array([0.1, -0.5, 0.5]))
    rows = list(csv.reader(open(p)))
    assert rows[0] == ["term", "r"]
    assert [r[0] for r in rows[1:]] == ["bb", "cc", "aa"]


def test_evaluate_reports_auc_only_with_probabilities():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(60, 2))
    y = np.where(x[:, 0] + 0.3 * rng.normal(size=60) > 0, "right", "left")
    rep = evaluate(LogisticRegression().fit(x, y), x, y).to_dict()
    assert rep["auc"] > 0.9 and rep["class_order"] == ["left", "right"]
    assert sum(map(sum, rep["confusion"])) == 60
    rep = evaluate(LinearSVC().fit(x, y), x, y).to_dict()
    assert rep["auc"] is None and rep["accuracy"] > 0.8
