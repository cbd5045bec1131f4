"""Incremental feature-setting comparison on a fixed train/test split."""
from dataclasses import dataclass

from ..features import FEATURE_SETS, FeatureError
from ..learner import LabeledDataset, train
from .metrics import PRFReport, confusion, prf
from .stats import ChiSquaredResult, chi_squared_compare

DEFAULT_SETTINGS = ("ngrams", "keyword", "keyword+semantic", "full")


@dataclass(frozen=True)
class SettingResult:
    name: str
    report: PRFReport
    predictions: tuple
    significance: ChiSquaredResult | None  # against the previous setting


def ablation_run(train_data: LabeledDataset, test_data: LabeledDataset, schema,
                 settings=DEFAULT_SETTINGS, C=0.05, seed=0, contingency="correctness"):
    """Train and evaluate one model per feature setting.

    Columns outside a setting's blocks are zeroed in both splits, so their
    weights stay exactly 0. Consecutive settings are compared with a
    chi-squared test on the test-set predictions.
    """
    settings = list(settings)
    if not settings:
        raise FeatureError("no feature settings given")
    gold = test_data.labels
    results, previous = [], None
    for name in settings:
        blocks = FEATURE_SETS.get(name, name) if isinstance(name, str) else name
        mask = schema.mask(blocks)
        model = train(train_data.masked(mask), C=C, seed=seed, feature_set=str(name))
        pred = tuple(model.predict_matrix(test_data.masked(mask).X))
        sig = None
        if previous is not None:
            sig = chi_squared_compare(gold, previous, pred, contingency=contingency)
        label = name if isinstance(name, str) else "+".join(sorted(name))
        results.append(SettingResult(label, prf(confusion(gold, pred)), pred, sig))
        previous = pred
    return results
