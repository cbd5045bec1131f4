import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from devsenti.evalkit.stats import (
    ZeroExpectedCellWarning, chi2_sf, chi_squared_compare, gammaincc, pearson_chi2,
)

LABELS = st.sampled_from(["negative", "positive", "neutral"])


@given(st.floats(0.05, 60), st.floats(0, 200))
@settings(max_examples=300)
def test_gammaincc_matches_reference(a, x):
    assert gammaincc(a, x) == pytest.approx(special.gammaincc(a, x), rel=1e-9, abs=1e-14)


@pytest.mark.parametrize("a, x", [(0, 1), (-1, 1), (1, -0.5)])
def test_gammaincc_domain(a, x):
    with pytest.raises(ValueError):
        gammaincc(a, x)


def test_chi2_sf_quantiles():
    assert chi2_sf(3.841, 1) == pytest.approx(0.05, abs=1e-3)
    assert chi2_sf(5.991, 2) == pytest.approx(0.05, abs=1e-3)
    assert chi2_sf(0.0, 1) == 1.0


def test_two_by_two_example():
    stat, dof = pearson_chi2([[90, 10], [50, 50]])
    assert stat == pytest.approx(2 * (400 / 70 + 400 / 30)) and dof == 1
    assert chi2_sf(stat, dof) < 0.001


def test_compare_builds_table():
    gold = ["positive"] * 100
    a = ["positive"] * 90 + ["negative"] * 10
    b = ["positive"] * 50 + ["neutral"] * 50
    res = chi_squared_compare(gold, a, b)
    assert res.table == ((90, 10), (50, 50))
    assert res.statistic == pytest.approx(38.095, abs=1e-3)
    assert res.significant()


def test_yates():
    plain, _ = pearson_chi2([[90, 10], [50, 50]])
    corrected, _ = pearson_chi2([[90, 10], [50, 50]], correction=True)
    assert corrected < plain
    assert corrected == pytest.approx(2 * (19.5 ** 2 / 70 + 19.5 ** 2 / 30))


@given(st.lists(st.tuples(LABELS, LABELS), min_size=1, max_size=40))
def test_identical_predictions(pairs):
    gold, pred = zip(*pairs)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ZeroExpectedCellWarning)
        stat, dof, p = chi_squared_compare(gold, pred, pred)
    assert (stat, dof, p) == (0.0, 1, 1.0)


def test_zero_cell_warns():
    with pytest.warns(ZeroExpectedCellWarning):
        res = chi_squared_compare(["neutral"] * 4, ["neutral"] * 4, ["neutral"] * 4)
    assert res.p_value == 1.0


def test_label_contingency():
    gold = ["positive"] * 6
    a = ["positive", "positive", "negative", "negative", "neutral", "neutral"]
    res = chi_squared_compare(gold, a, a, contingency="labels")
    assert res.dof == 4 and res.statistic == pytest.approx(12.0)
    with pytest.raises(ValueError):
        chi_squared_compare(gold, a, a, contingency="other")


@given(st.lists(st.tuples(LABELS, LABELS, LABELS), min_size=2, max_size=50))
def test_statistic_matches_scipy(triples):
    from scipy.stats import chi2_contingency

    gold, a, b = zip(*triples)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ZeroExpectedCellWarning)
        res = chi_squared_compare(gold, a, b)
    table = np.array(res.table)
    if (table.sum(axis=0) == 0).any():
        return
    ref = chi2_contingency(table, correction=False)
    assert res.statistic == pytest.approx(ref.statistic, abs=1e-9)
    assert res.p_value == pytest.approx(ref.pvalue, abs=1e-9)
