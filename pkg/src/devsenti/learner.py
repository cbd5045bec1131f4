"""One-vs-rest linear SVM trained by dual coordinate descent.

Each binary problem is the L2-regularized hinge-loss SVM in its dual form,

    max_a  sum(a) - 1/2 ||sum_i a_i y_i x_i||^2,   0 <= a_i <= C,

solved one coordinate at a time with the primal vector ``w`` kept in sync.
The bias is learned as the weight of an appended constant-1 feature.
"""
import json
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy import sparse

from .features import SchemaMismatch
from .labels import CLASS_ORDER, Label, as_label

MODEL_VERSION = 1
DEFAULT_GRID = (0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0)


class LearnerError(ValueError):
    pass


class EmptyDataset(LearnerError):
    pass


class TooFewExamplesPerClass(LearnerError):
    def __init__(self, folds, counts):
        super().__init__(f"{folds}-fold split needs >= {folds} examples per class, got {counts}")
        self.folds = folds


@dataclass
class LabeledDataset:
    X: sparse.csr_matrix
    labels: list
    schema_id: str = ""

    def __post_init__(self):
        self.X = sparse.csr_matrix(self.X, dtype=np.float64)
        self.labels = [as_label(l) for l in self.labels]
        if self.X.shape[0] != len(self.labels):
            raise LearnerError("feature rows and labels differ in length")

    @classmethod
    def from_vectors(cls, vectors, labels, schema):
        from .features import to_matrix

        return cls(to_matrix(vectors, schema), labels, schema.schema_id)

    def __len__(self):
        return len(self.labels)

    def subset(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        return LabeledDataset(self.X[idx], [self.labels[i] for i in idx], self.schema_id)

    def masked(self, mask):
        """Same rows with the columns outside ``mask`` zeroed."""
        keep = sparse.diags(np.asarray(mask, dtype=np.float64))
        X = sparse.csr_matrix(self.X @ keep)
        X.eliminate_zeros()
        return LabeledDataset(X, self.labels, self.schema_id)


# --- solver -----------------------------------------------------------------

@njit(cache=True)
def _dcd_pass(indptr, indices, data, y, qdiag, C, order, w, alpha, gains):
    """One sweep over ``order``; returns the largest projected-gradient violation."""
    worst = 0.0
    for t in range(order.shape[0]):
        i = order[t]
        gains[t] = 0.0
        start, end = indptr[i], indptr[i + 1]
        wx = 0.0
        for p in range(start, end):
            wx += w[indices[p]] * data[p]
        G = y[i] * wx - 1.0
        a = alpha[i]
        if a == 0.0:
            PG = min(G, 0.0)
        elif a == C:
            PG = max(G, 0.0)
        else:
            PG = G
        if abs(PG) > worst:
            worst = abs(PG)
        if PG != 0.0 and qdiag[i] > 0.0:
            new = min(max(a - G / qdiag[i], 0.0), C)
            delta = new - a
            alpha[i] = new
            step = delta * y[i]
            for p in range(start, end):
                w[indices[p]] += step * data[p]
            gains[t] = -delta * G - 0.5 * delta * delta * qdiag[i]
    return worst


def _augment(X):
    X = sparse.csr_matrix(X, dtype=np.float64)
    ones = sparse.csr_matrix(np.ones((X.shape[0], 1)))
    out = sparse.hstack([X, ones], format="csr")
    out.sort_indices()
    return out


def dual_objective(Xa, y, alpha):
    """Dual objective sum(a) - 1/2||w||^2 recomputed from scratch."""
    w = Xa.T @ (alpha * y)
    return float(alpha.sum() - 0.5 * w @ w)


def _solve_binary(Xa, y, C, rng, tol, max_iter, trace=None):
    n, d = Xa.shape
    w = np.zeros(d)
    alpha = np.zeros(n)
    qdiag = np.asarray(Xa.multiply(Xa).sum(axis=1)).ravel()
    gains = np.zeros(n)
    objective = 0.0
    passes = 0
    for passes in range(1, max_iter + 1):
        order = rng.permutation(n)
        worst = _dcd_pass(Xa.indptr, Xa.indices, Xa.data, y, qdiag, C, order, w, alpha, gains)
        if trace is not None:
            steps = objective + np.cumsum(gains)
            trace.append((steps, alpha.copy()))
            objective = float(steps[-1]) if n else objective
        if worst < tol:
            break
    return w, alpha, passes


@dataclass
class PolarityModel:
    weights: np.ndarray            # (3, dim + 1), last column is the bias
    present: np.ndarray            # classes seen in training
    C: float
    schema_id: str = ""
    scaling: str = "none"
    training_meta: dict = field(default_factory=dict)
    classes: tuple = CLASS_ORDER

    @property
    def dim(self):
        return self.weights.shape[1] - 1

    def decision_function(self, X):
        X = sparse.csr_matrix(X, dtype=np.float64)
        if X.shape[1] != self.dim:
            raise SchemaMismatch(f"model expects {self.dim} features, got {X.shape[1]}")
        scores = np.asarray(X @ self.weights[:, :-1].T) + self.weights[:, -1]
        scores[:, ~self.present] = -np.inf
        return scores

    def predict_matrix(self, X):
        scores = self.decision_function(X)
        # argmax keeps the first maximum, i.e. the fixed class order breaks ties
        return [self.classes[k] for k in np.argmax(scores, axis=1)]

    def to_json(self):
        return {
            "version": MODEL_VERSION,
            "classes": [c.value for c in self.classes],
            "C": self.C,
            "schema_id": self.schema_id,
            "scaling_flag": self.scaling,
            "training_meta": self.training_meta,
            "weights": {
                c.value: (self.weights[k].tolist() if self.present[k] else None)
                for k, c in enumerate(self.classes)
            },
        }

    @classmethod
    def from_json(cls, data):
        if data.get("version") != MODEL_VERSION:
            raise LearnerError(f"unsupported model version {data.get('version')}")
        classes = tuple(Label(c) for c in data["classes"])
        rows = [data["weights"][c.value] for c in classes]
        dim = next(len(r) for r in rows if r is not None)
        weights = np.array([r if r is not None else [0.0] * dim for r in rows], dtype=np.float64)
        present = np.array([r is not None for r in rows])
        return cls(weights, present, float(data["C"]), data.get("schema_id", ""),
                   data.get("scaling_flag", "none"), data.get("training_meta", {}), classes)

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def train(data: LabeledDataset, C: float = 0.05, seed: int = 0, tol: float = 0.1,
          max_iter: int = 1000, trace=None, **meta) -> PolarityModel:
    """Fit one binary SVM per class of ``CLASS_ORDER``.

    A class absent from ``data`` is never predicted. ``trace``, if a dict,
    receives per class a list with one ``(objective_after_each_update,
    alpha_at_end_of_pass)`` pair per pass (debug aid).
    """
    if len(data) == 0:
        raise EmptyDataset("cannot train on an empty dataset")
    if not C > 0:
        raise LearnerError("C must be positive")
    Xa = _augment(data.X)
    labels = np.array([CLASS_ORDER.index(l) for l in data.labels])
    rng = np.random.default_rng(seed)
    weights = np.zeros((len(CLASS_ORDER), Xa.shape[1]))
    present = np.zeros(len(CLASS_ORDER), dtype=bool)
    passes = {}
    for k, cls in enumerate(CLASS_ORDER):
        if not np.any(labels == k):
            continue
        present[k] = True
        y = np.where(labels == k, 1.0, -1.0)
        class_trace = [] if trace is not None else None
        weights[k], _, passes[cls.value] = _solve_binary(Xa, y, C, rng, tol, max_iter, class_trace)
        if trace is not None:
            trace[cls] = class_trace
    training_meta = {"seed": seed, "tolerance": tol, "max_iter": max_iter, "passes": passes}
    training_meta.update(meta)
    return PolarityModel(weights, present, float(C), data.schema_id, "none", training_meta)


def predict(model: PolarityModel, fv):
    """Label and the three decision values for one FeatureVector."""
    if model.schema_id and fv.schema_id != model.schema_id:
        raise SchemaMismatch(f"vector schema {fv.schema_id} != model schema {model.schema_id}")
    row = sparse.csr_matrix(
        (list(fv.entries.values()), ([0] * len(fv.entries), list(fv.entries.keys()))),
        shape=(1, model.dim))
    scores = model.decision_function(row)[0]
    return model.classes[int(np.argmax(scores))], tuple(float(s) for s in scores)


# --- model selection --------------------------------------------------------

def stratified_folds(labels, folds: int, seed: int = 0):
    """Seeded stratified k-fold assignment; returns a fold id per example."""
    if folds < 2:
        raise LearnerError("folds must be >= 2")
    labels = [as_label(l) for l in labels]
    counts = {c.value: labels.count(c) for c in CLASS_ORDER if c in labels}
    if any(n < folds for n in counts.values()):
        raise TooFewExamplesPerClass(folds, counts)
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(labels), dtype=np.int64)
    offset = 0
    for cls in CLASS_ORDER:
        idx = np.array([i for i, l in enumerate(labels) if l is cls], dtype=np.int64)
        if idx.size == 0:
            continue
        idx = idx[rng.permutation(idx.size)]
        assignment[idx] = (offset + np.arange(idx.size)) % folds
        offset += idx.size
    return assignment


@dataclass(frozen=True)
class CVResult:
    C: float
    fold_accuracy: tuple

    @property
    def mean_accuracy(self):
        return float(np.mean(self.fold_accuracy))


def _cv(data, C, assignment, folds, seed, **kw):
    accs = []
    for f in range(folds):
        test = np.flatnonzero(assignment == f)
        train_idx = np.flatnonzero(assignment != f)
        model = train(data.subset(train_idx), C=C, seed=seed, **kw)
        pred = model.predict_matrix(data.X[test])
        gold = [data.labels[i] for i in test]
        accs.append(sum(p is g for p, g in zip(pred, gold)) / len(test))
    return CVResult(float(C), tuple(accs))


def cross_validate(data: LabeledDataset, C: float, folds: int = 10, seed: int = 0, **kw) -> CVResult:
    assignment = stratified_folds(data.labels, folds, seed)
    return _cv(data, C, assignment, folds, seed, **kw)


def tune_C(data: LabeledDataset, grid=DEFAULT_GRID, folds: int = 10, seed: int = 0, **kw):
    """Pick the C with the best mean CV accuracy; the smallest C wins ties.

    Every grid value is scored on the same folds. Returns
    ``(best_C, {C: mean_accuracy})``.
    """
    grid = sorted(set(float(c) for c in grid))
    if not grid:
        raise LearnerError("empty C grid")
    assignment = stratified_folds(data.labels, folds, seed)
    scores = {}
    best, best_acc = None, -1.0
    for C in grid:
        acc = _cv(data, C, assignment, folds, seed, **kw).mean_accuracy
        scores[C] = acc
        if acc > best_acc:
            best, best_acc = C, acc
    return best, scores
