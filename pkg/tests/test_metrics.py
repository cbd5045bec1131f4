import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from devsenti.evalkit.metrics import (
    CM_ORDER, ConfusionMatrix, EmptyMatrix, InvalidLabel, LengthMismatch, accuracy, confusion,
    discretize, entropy, equal_frequency_bins, feature_kind, information_gain, prf,
    rank_features,
)
from devsenti.labels import Label

LABELS = st.sampled_from(["negative", "positive", "neutral"])


def test_confusion_diagonal():
    gold = ["negative", "positive", "neutral", "neutral"]
    cm = confusion(gold, gold)
    assert np.array_equal(cm.counts, np.diag([1, 1, 2]))
    rep = prf(cm)
    assert rep.overall.F == 1.0
    assert all(m.R == m.P == m.F == 1.0 for m in rep.per_class.values())


def test_confusion_single_cell():
    cm = confusion(["neutral"], ["negative"])
    assert cm.cell("neutral", "negative") == 1 and cm.total == 1


def test_confusion_errors():
    with pytest.raises(LengthMismatch):
        confusion(["neutral"], [])
    with pytest.raises(InvalidLabel):
        confusion(["happy"], ["neutral"])
    with pytest.raises(EmptyMatrix):
        prf(ConfusionMatrix(np.zeros((3, 3), dtype=int)))


def test_zero_predicted_column():
    cm = confusion(["positive", "negative"], ["negative", "negative"])
    pos = prf(cm).per_class[Label.POSITIVE]
    assert pos.P == 0.0 and pos.F == 0.0 and pos.R == 0.0


def test_per_class_by_hand():
    counts = np.array([[5, 1, 2], [0, 6, 2], [1, 1, 4]])
    rep = prf(ConfusionMatrix(counts))
    neg = rep.per_class[Label.NEGATIVE]
    assert neg.R == pytest.approx(5 / 8) and neg.P == pytest.approx(5 / 6)
    assert neg.F == pytest.approx(2 * (5 / 8) * (5 / 6) / (5 / 8 + 5 / 6))
    assert rep.overall.F == pytest.approx(15 / 22)


@given(arrays(np.int64, (3, 3), elements=st.integers(0, 50)).filter(lambda a: a.sum() > 0))
def test_micro_equals_accuracy(counts):
    rep = prf(ConfusionMatrix(counts))
    acc = np.trace(counts) / counts.sum()
    assert abs(rep.overall.R - acc) < 1e-12
    assert abs(rep.overall.P - acc) < 1e-12
    assert abs(rep.overall.F - acc) < 1e-12


@given(st.lists(st.tuples(LABELS, LABELS), min_size=1, max_size=40))
def test_accuracy_matches_trace(pairs):
    gold, pred = zip(*pairs)
    cm = confusion(gold, pred)
    assert accuracy(gold, pred) == pytest.approx(np.trace(cm.counts) / cm.total)


def test_entropy():
    assert entropy(["a", "b"]) == pytest.approx(1.0)
    assert entropy(["a"] * 4) == 0.0
    assert entropy(["a", "b", "c", "d"]) == pytest.approx(2.0)


def test_ig_constant_and_perfect():
    labels = ["positive", "negative"] * 10
    assert information_gain(np.zeros(20), labels) == 0.0
    indicator = [1 if l == "positive" else 0 for l in labels]
    assert information_gain(indicator, labels) == pytest.approx(1.0)


def test_ig_length_mismatch():
    with pytest.raises(LengthMismatch):
        information_gain([1, 2], ["positive"])


@given(arrays(np.float64, 30, elements=st.floats(-50, 50)),
       st.lists(LABELS, min_size=30, max_size=30))
def test_ig_bounded(column, labels):
    ig = information_gain(column, labels, "continuous")
    assert 0.0 <= ig <= entropy(labels) + 1e-12


@given(arrays(np.int64, 40, elements=st.integers(-500, 500)),
       st.lists(LABELS, min_size=40, max_size=40))
def test_ig_increasing_transform_invariant(column, labels):
    # values on a 0.01 grid so the transforms stay strictly increasing in floating point
    column = column / 100.0
    base = information_gain(column, labels, "continuous")
    assert information_gain(np.exp(column), labels, "continuous") == pytest.approx(base)
    assert information_gain(3 * column + 7, labels, "continuous") == pytest.approx(base)


def test_equal_frequency_bins_ties_share():
    bins = equal_frequency_bins([1, 1, 1, 1, 2, 3, 4, 5, 6, 7], n_bins=5)
    assert len(set(bins[:4])) == 1
    assert list(bins) == sorted(bins)
    assert len(set(equal_frequency_bins(np.arange(100), 10))) == 10


@pytest.mark.parametrize("column, kind, expected", [
    ([0, 1, 1, 0], None, [0, 1, 1, 0]),
    ([0, 3, 7, 0], None, [0, 1, 1, 0]),
    ([0.5, 0.1, 0.9, 0.3], None, None),
])
def test_discretize_inference(column, kind, expected):
    out = discretize(column, kind)
    if expected is not None:
        assert list(out) == expected
    else:
        assert len(set(out)) == 4


@pytest.mark.parametrize("name, kind", [
    ("Sim_pos", "continuous"), ("Sum_neg", "continuous"), ("End_Pos", "binary"),
    ("Pos_words", "count"), ("'thanks'", "count"),
])
def test_feature_kind(name, kind):
    assert feature_kind(name) == kind


def test_rank_features():
    labels = ["positive", "negative"] * 10
    X = np.column_stack([np.zeros(20), [1 if l == "positive" else 0 for l in labels]])
    ranked = rank_features(X, ["flat", "End_Pos"], labels)
    assert [n for n, _ in ranked] == ["End_Pos", "flat"]
    assert rank_features(X, ["flat", "End_Pos"], labels, top=1)[0][0] == "End_Pos"


def test_cm_order():
    assert CM_ORDER == (Label.NEGATIVE, Label.POSITIVE, Label.NEUTRAL)
