"""Chi-squared comparison of two classifiers on the same gold labels."""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from ..labels import as_label
from .metrics import CM_ORDER, LengthMismatch

_EPS = 1e-15
_MAX_ITER = 10_000


class ZeroExpectedCellWarning(UserWarning):
    pass


def _lower_series(a, x):
    # P(a, x) by its power series; converges fast for x < a + 1
    term = total = 1.0 / a
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _upper_fraction(a, x):
    # Q(a, x) by modified Lentz evaluation of the continued fraction
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        d = tiny if abs(d) < tiny else d
        c = b + an / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def gammaincc(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) for a > 0, x >= 0."""
    if a <= 0:
        raise ValueError("a must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _lower_series(a, x))
    return min(1.0, _upper_fraction(a, x))


def chi2_sf(statistic: float, dof: int) -> float:
    """Upper-tail probability of the chi-squared distribution."""
    return gammaincc(dof / 2.0, max(0.0, statistic) / 2.0)


@dataclass(frozen=True)
class ChiSquaredResult:
    statistic: float
    dof: int
    p_value: float
    table: tuple = ()

    def __iter__(self):
        return iter((self.statistic, self.dof, self.p_value))

    def significant(self, alpha=0.05):
        return self.p_value < alpha


def pearson_chi2(table, correction=False):
    """Pearson test of independence on a contingency table.

    All-zero rows/columns are dropped first. Cells with zero expectation
    are skipped with a ZeroExpectedCellWarning. ``correction`` applies
    Yates' continuity correction (2x2 only).
    """
    obs = np.asarray(table, dtype=np.float64)
    design_dof = (obs.shape[0] - 1) * (obs.shape[1] - 1)
    rows, cols = obs.sum(axis=1) > 0, obs.sum(axis=0) > 0
    if not (rows.all() and cols.all()):
        warnings.warn("zero expected cell in contingency table", ZeroExpectedCellWarning,
                      stacklevel=2)
        obs = obs[rows][:, cols]
    if obs.shape[0] < 2 or obs.shape[1] < 2:
        return 0.0, design_dof
    total = obs.sum()
    expected = np.outer(obs.sum(axis=1), obs.sum(axis=0)) / total
    diff = np.abs(obs - expected)
    if correction and obs.shape == (2, 2):
        diff = np.maximum(diff - 0.5, 0.0)
    stat = float((diff ** 2 / expected).sum())
    return stat, (obs.shape[0] - 1) * (obs.shape[1] - 1)


def chi_squared_compare(gold, pred_a, pred_b, correction=False, contingency="correctness"):
    """Test whether two classifiers differ on the same items.

    ``contingency="correctness"`` (default) builds the 2x2 table
    classifier x {correct, incorrect}. ``"labels"`` cross-tabulates A's
    and B's predicted labels (3x3) instead.
    """
    gold = [as_label(g) for g in gold]
    pred_a = [as_label(p) for p in pred_a]
    pred_b = [as_label(p) for p in pred_b]
    if not len(gold) == len(pred_a) == len(pred_b):
        raise LengthMismatch("gold and prediction sequences differ in length")
    if contingency == "correctness":
        ca = sum(g is p for g, p in zip(gold, pred_a))
        cb = sum(g is p for g, p in zip(gold, pred_b))
        table = np.array([[ca, len(gold) - ca], [cb, len(gold) - cb]])
    elif contingency == "labels":
        table = np.zeros((3, 3), dtype=np.int64)
        for a, b in zip(pred_a, pred_b):
            table[CM_ORDER.index(a), CM_ORDER.index(b)] += 1
    else:
        raise ValueError(f"unknown contingency {contingency!r}")
    stat, dof = pearson_chi2(table, correction)
    return ChiSquaredResult(stat, dof, chi2_sf(stat, dof), tuple(map(tuple, table.tolist())))
