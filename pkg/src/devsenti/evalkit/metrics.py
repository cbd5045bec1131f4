"""Confusion matrices, precision/recall/F, entropy and information gain."""
from dataclasses import dataclass

import numpy as np

from ..labels import Label, as_label

# row/column order of reported confusion matrices
CM_ORDER = (Label.NEGATIVE, Label.POSITIVE, Label.NEUTRAL)


class LengthMismatch(ValueError):
    pass


class InvalidLabel(ValueError):
    pass


class EmptyMatrix(ValueError):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: np.ndarray  # [gold][predicted] in CM_ORDER

    @property
    def total(self):
        return int(self.counts.sum())

    def cell(self, gold, pred):
        return int(self.counts[CM_ORDER.index(as_label(gold)), CM_ORDER.index(as_label(pred))])


def _labels(seq):
    try:
        return [as_label(x) for x in seq]
    except ValueError as exc:
        raise InvalidLabel(str(exc)) from None


def confusion(gold, pred) -> ConfusionMatrix:
    gold, pred = _labels(gold), _labels(pred)
    if len(gold) != len(pred):
        raise LengthMismatch(f"{len(gold)} gold labels vs {len(pred)} predictions")
    counts = np.zeros((3, 3), dtype=np.int64)
    for g, p in zip(gold, pred):
        counts[CM_ORDER.index(g), CM_ORDER.index(p)] += 1
    return ConfusionMatrix(counts)


def _ratio(a, b):
    return a / b if b else 0.0


def _f(p, r):
    return _ratio(2 * p * r, p + r)


@dataclass(frozen=True)
class PRF:
    R: float
    P: float
    F: float


@dataclass(frozen=True)
class PRFReport:
    per_class: dict
    overall: PRF

    def to_json(self):
        out = {"overall": vars(self.overall)}
        out.update({c.value: vars(m) for c, m in self.per_class.items()})
        return out


def prf(cm: ConfusionMatrix) -> PRFReport:
    """Per-class and micro-averaged recall, precision and F; 0/0 counts as 0."""
    c = np.asarray(cm.counts, dtype=np.float64)
    if c.sum() == 0:
        raise EmptyMatrix("confusion matrix has no entries")
    per_class = {}
    for k, label in enumerate(CM_ORDER):
        tp = c[k, k]
        r = _ratio(tp, c[k, :].sum())
        p = _ratio(tp, c[:, k].sum())
        per_class[label] = PRF(r, p, _f(p, r))
    tp = np.trace(c)
    fp = c.sum() - tp  # every off-diagonal cell is one FP (column) ...
    fn = c.sum() - tp  # ... and one FN (row)
    r, p = _ratio(tp, tp + fn), _ratio(tp, tp + fp)
    return PRFReport(per_class, PRF(r, p, _f(p, r)))


def accuracy(gold, pred):
    gold, pred = _labels(gold), _labels(pred)
    if len(gold) != len(pred):
        raise LengthMismatch(f"{len(gold)} gold labels vs {len(pred)} predictions")
    return _ratio(sum(g is p for g, p in zip(gold, pred)), len(gold))


# --- information gain -------------------------------------------------------

def entropy(labels) -> float:
    """Shannon entropy in bits of a label sequence."""
    _, counts = np.unique(np.asarray([str(l) for l in labels]), return_counts=True)
    if counts.size == 0:
        return 0.0
    p = counts / counts.sum()
    return float(-(p * np.log2(p)).sum())


def equal_frequency_bins(column, n_bins=10):
    """Rank-based bins; tied values always share a bin."""
    column = np.asarray(column, dtype=np.float64)
    n = column.size
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    ordered = np.sort(column)
    cuts = ordered[[(k * n) // n_bins for k in range(1, n_bins)]]
    return np.searchsorted(np.unique(cuts), column, side="right")


def discretize(column, kind=None, n_bins=10):
    """Bin a feature column.

    ``kind`` is ``"binary"`` (values used as-is), ``"count"`` (zero vs
    nonzero) or ``"continuous"`` (equal-frequency bins). When omitted it is
    inferred: {0,1} columns are binary, integer columns count, the rest
    continuous.
    """
    column = np.asarray(column, dtype=np.float64)
    if kind is None:
        if np.all(np.isin(column, (0.0, 1.0))):
            kind = "binary"
        elif np.all(column == np.round(column)):
            kind = "count"
        else:
            kind = "continuous"
    if kind == "binary":
        return (column != 0).astype(np.int64)
    if kind == "count":
        return (column != 0).astype(np.int64)
    if kind == "continuous":
        return equal_frequency_bins(column, n_bins)
    raise ValueError(f"unknown feature kind {kind!r}")


def information_gain(feature_column, labels, kind=None, n_bins=10) -> float:
    """H(labels) - sum_b |b|/N H(labels | b), in bits."""
    labels = [str(l) for l in labels]
    if len(feature_column) != len(labels):
        raise LengthMismatch(f"{len(feature_column)} values vs {len(labels)} labels")
    if not labels:
        return 0.0
    bins = discretize(feature_column, kind, n_bins)
    labels_arr = np.asarray(labels)
    n = len(labels)
    cond = 0.0
    for b in np.unique(bins):
        sel = labels_arr[bins == b]
        cond += sel.size / n * entropy(sel)
    return max(0.0, entropy(labels) - cond)


def feature_kind(name):
    """Binning rule for a named feature column."""
    from ..features import BOOLEAN_FEATURES

    if name.startswith("Sim_") or name.startswith("Sum_"):
        return "continuous"
    if name in BOOLEAN_FEATURES:
        return "binary"
    return "count"


def rank_features(X, names, labels, top=None):
    """Sort columns of a (sparse or dense) matrix by information gain.

    Returns ``[(name, ig), ...]`` descending; ties keep column order.
    """
    from scipy import sparse

    X = sparse.csc_matrix(X) if sparse.issparse(X) else np.asarray(X)
    scored = []
    for j, name in enumerate(names):
        col = X[:, j].toarray().ravel() if sparse.issparse(X) else X[:, j]
        scored.append((name, information_gain(col, labels, feature_kind(name))))
    scored.sort(key=lambda t: -t[1])
    return scored[:top] if top else scored
