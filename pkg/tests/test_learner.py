import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import sparse

from devsenti.features import FeatureVector, SchemaMismatch
from devsenti.labels import CLASS_ORDER, Label
from devsenti.learner import (
    EmptyDataset, LabeledDataset, LearnerError, PolarityModel, TooFewExamplesPerClass,
    _augment, cross_validate, dual_objective, predict, stratified_folds, train, tune_C,
)

NEG, NEU, POS = Label.NEGATIVE, Label.NEUTRAL, Label.POSITIVE


def blobs(n_per_class=50, seed=0, spread=0.3):
    rng = np.random.default_rng(seed)
    centers = {NEG: (0.0, 3.0), NEU: (3.0, 0.0), POS: (-3.0, -3.0)}
    X, y = [], []
    for label, c in centers.items():
        X.append(rng.normal(c, spread, size=(n_per_class, 2)))
        y += [label] * n_per_class
    return LabeledDataset(sparse.csr_matrix(np.vstack(X)), y)


def test_toy_two_class():
    data = LabeledDataset(np.array([[0, 1], [0, 2], [3, 0], [4, 0]]), [NEG, NEG, POS, POS])
    model = train(data, C=1.0)
    assert model.predict_matrix(data.X) == data.labels
    assert model.predict_matrix(np.array([[0, 1.5]])) == [NEG]
    assert not model.present[CLASS_ORDER.index(NEU)]


def test_separable_three_class():
    data = blobs()
    model = train(data, C=1.0, seed=3)
    assert model.predict_matrix(data.X) == data.labels


def test_single_class():
    data = LabeledDataset(np.eye(3), [NEU] * 3)
    model = train(data)
    assert model.predict_matrix(np.random.default_rng(0).normal(size=(5, 3))) == [NEU] * 5


def test_empty_dataset():
    with pytest.raises(EmptyDataset):
        train(LabeledDataset(sparse.csr_matrix((0, 3)), []))


def test_bad_C():
    with pytest.raises(LearnerError):
        train(blobs(5), C=0.0)


def test_objective_monotone():
    data = blobs(20, spread=1.5)
    trace = {}
    train(data, C=0.5, seed=1, trace=trace)
    Xa = _augment(data.X)
    for k, cls in enumerate(CLASS_ORDER):
        y = np.where(np.array([l is cls for l in data.labels]), 1.0, -1.0)
        previous = -np.inf
        for objectives, alpha in trace[cls]:
            assert np.all(np.diff(objectives) >= -1e-12)
            assert objectives[0] >= previous - 1e-12
            assert dual_objective(Xa, y, alpha) == pytest.approx(objectives[-1], abs=1e-9)
            previous = objectives[-1]


def test_deterministic():
    data = blobs(30, spread=1.0)
    a = train(data, C=0.1, seed=9)
    b = train(data, C=0.1, seed=9)
    assert np.array_equal(a.weights, b.weights)
    assert np.array_equal(a.decision_function(data.X), b.decision_function(data.X))


def _bias_model(biases, dim=2):
    weights = np.zeros((3, dim + 1))
    weights[:, -1] = biases
    return PolarityModel(weights, np.ones(3, dtype=bool), 1.0, "s")


@pytest.mark.parametrize("biases, label", [
    ((-1.0, 0.0, 1.0), POS),
    ((0.5, 0.5, -1.0), NEG),
    ((0.0, 0.7, 0.7), NEU),
    ((0.2, 0.2, 0.2), NEG),
])
def test_predict_tie_break(biases, label):
    fv = FeatureVector({}, "s")
    got, scores = predict(_bias_model(biases), fv)
    assert got is label and scores == biases


@given(st.floats(-100, 100))
def test_argmax_shift_invariant(shift):
    X = np.random.default_rng(1).normal(size=(10, 2))
    model = train(blobs(10), C=1.0)
    shifted = PolarityModel(model.weights.copy(), model.present, model.C)
    shifted.weights[:, -1] += shift
    assert shifted.predict_matrix(X) == model.predict_matrix(X)


def test_schema_mismatch():
    with pytest.raises(SchemaMismatch):
        predict(_bias_model((0, 0, 0)), FeatureVector({}, "other"))
    with pytest.raises(SchemaMismatch):
        _bias_model((0, 0, 0)).decision_function(np.zeros((1, 5)))


def test_model_roundtrip(tmp_path):
    data = LabeledDataset(np.array([[0, 1], [0, 2], [3, 0], [4, 0]]), [NEG, NEG, POS, POS], "sid")
    model = train(data, C=0.7, seed=2)
    model.save(tmp_path / "m.json")
    back = PolarityModel.load(tmp_path / "m.json")
    X = np.random.default_rng(0).normal(size=(20, 2))
    assert np.array_equal(back.decision_function(X), model.decision_function(X))
    assert back.schema_id == "sid" and back.C == 0.7
    assert list(back.present) == [True, False, True]


@given(st.lists(st.sampled_from([NEG, NEU, POS]), min_size=12, max_size=60), st.integers(2, 4),
       st.integers(0, 2**16))
@settings(max_examples=100)
def test_stratified_folds(labels, folds, seed):
    counts = {c: labels.count(c) for c in set(labels)}
    if min(counts.values()) < folds:
        with pytest.raises(TooFewExamplesPerClass):
            stratified_folds(labels, folds, seed)
        return
    assignment = stratified_folds(labels, folds, seed)
    for f in range(folds):
        members = [labels[i] for i in np.flatnonzero(assignment == f)]
        for c, n in counts.items():
            share = n * len(members) / len(labels)
            assert abs(members.count(c) - n / folds) <= 1 + 1e-9
            assert abs(members.count(c) - share) <= 2 + 1e-9
    assert np.array_equal(assignment, stratified_folds(labels, folds, seed))


def test_cross_validate_separable():
    assert cross_validate(blobs(20), C=1.0, folds=5).mean_accuracy == 1.0


def test_cross_validate_single_class():
    data = LabeledDataset(np.random.default_rng(0).normal(size=(10, 3)), [POS] * 10)
    assert cross_validate(data, C=1.0, folds=5).mean_accuracy == 1.0


def test_cross_validate_random_labels():
    rng = np.random.default_rng(4)
    labels = [CLASS_ORDER[i % 3] for i in range(300)]
    data = LabeledDataset(rng.normal(size=(300, 5)), labels)
    acc = cross_validate(data, C=0.1, folds=5, seed=1).mean_accuracy
    assert abs(acc - 1 / 3) < 0.1


def test_tune_singleton_and_ties():
    data = blobs(20)
    assert tune_C(data, [0.3], folds=5)[0] == 0.3
    best, scores = tune_C(data, [0.05, 0.01], folds=5)
    assert scores[0.01] == scores[0.05] == 1.0 and best == 0.01


def test_masked_columns_get_zero_weight():
    data = blobs(20)
    model = train(data.masked([True, False]), C=1.0)
    assert np.all(model.weights[:, 1] == 0.0)
