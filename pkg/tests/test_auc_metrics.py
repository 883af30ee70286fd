import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exactauc.auc_metrics import TiePolicy, auc_from_scores, roc_points
from exactauc.core import AucValue


def test_single_pair():
    assert auc_from_scores([1.0], [0.0]) == AucValue(1, 1)


def test_pure_tie_policies():
    assert auc_from_scores([0.5], [0.5], "half") == 0.5
    assert auc_from_scores([0.5], [0.5], TiePolicy.STRICT).value == 0.0


def test_four_pairs():
    assert auc_from_scores([3, 1], [2, 0]).value == 0.75


def test_roc_simple():
    assert roc_points([1.0], [0.0]).points == [(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)]


def test_roc_tie_is_diagonal():
    assert roc_points([0.5], [0.5]).points == [(0.0, 0.0), (1.0, 1.0)]


def test_roc_area_four_pairs():
    assert roc_points([3, 1], [2, 0]).area() == 0.75


def test_roc_csv():
    assert roc_points([1.0], [0.0]).to_csv() == "fpr,tpr\n0.0,0.0\n0.0,1.0\n1.0,1.0\n"


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        auc_from_scores([], [1.0])
    with pytest.raises(ValueError):
        auc_from_scores([np.nan], [1.0])
    with pytest.raises(ValueError):
        auc_from_scores([1.0], [0.0], "sometimes")


def _pairs(pos, neg):
    above = sum(a > b for a in pos for b in neg)
    tied = sum(a == b for a in pos for b in neg)
    return above, tied


scores = st.lists(st.integers(-4, 4).map(float), min_size=1, max_size=12)


@settings(max_examples=100, deadline=None)
@given(pos=scores, neg=scores)
def test_matches_pair_enumeration(pos, neg):
    above, tied = _pairs(pos, neg)
    total = len(pos) * len(neg)
    assert auc_from_scores(pos, neg).satisfied_pairs == above
    assert auc_from_scores(pos, neg, "half") == pytest.approx((above + 0.5 * tied) / total, abs=1e-15)
    # the trapezoid under the tie-collapsed ROC is the half-credit AUC
    assert roc_points(pos, neg).area() == pytest.approx((above + 0.5 * tied) / total, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(pos=scores, neg=scores)
def test_roc_monotone_from_origin_to_corner(pos, neg):
    roc = roc_points(pos, neg)
    assert roc.points[0] == (0.0, 0.0) and roc.points[-1] == (1.0, 1.0)
    assert np.all(np.diff(roc.fpr) >= 0) and np.all(np.diff(roc.tpr) >= 0)
