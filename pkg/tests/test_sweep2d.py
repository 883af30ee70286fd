from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from instances import adversarial_2d

from exactauc.core import Dataset, evaluate_auc_direction
from exactauc.oracles import brute_force_2d
from exactauc.sweep2d import enumerate_slope_events, solve_2d, sweep_trace

XOR = Dataset.from_classes([[0, 0], [1, 1]], [[0, 1], [1, 0]])


def test_single_event_slope():
    groups = enumerate_slope_events(Dataset.from_classes([[0, 0]], [[1, 1]]))
    assert len(groups) == 1 and len(groups[0]) == 1
    assert groups[0][0].slope == -1.0
    assert groups[0][0].exact_slope() == Fraction(-1)


def test_vertical_pair_has_no_event():
    assert enumerate_slope_events(Dataset.from_classes([[0, 1]], [[0, 0]])) == []


def test_equal_slopes_form_one_group():
    groups = enumerate_slope_events(Dataset.from_classes([[0, 0], [1, 1]], [[2, 2]]))
    assert [len(g) for g in groups] == [2]
    assert groups[0][0].same_slope(groups[0][1])


def test_xor_optimum():
    res = solve_2d(XOR)
    assert str(res.auc) == "2/4"
    assert evaluate_auc_direction(XOR, res.direction) == res.auc


def test_single_pair_separable():
    res = solve_2d(Dataset.from_classes([[0, 1]], [[0, 0]]))
    assert res.auc.value == 1.0
    assert res.direction[1] > 0


def test_three_point_half():
    res = solve_2d(Dataset.from_classes([[1, 0], [0, 1]], [[0.5, 0.5]]))
    assert res.auc.fraction == Fraction(1, 2)


def test_coincident_points():
    ds = Dataset.from_classes([[1, 1], [1, 1]], [[1, 1]])
    assert solve_2d(ds).satisfied_pairs == 0


def test_rejects_wrong_dimension():
    with pytest.raises(ValueError):
        solve_2d(Dataset.from_classes([[0, 0, 1]], [[0, 0, 0]]))


def test_trace_counts_match_scratch(rng):
    ds = Dataset.from_classes(rng.standard_normal((12, 2)), rng.standard_normal((9, 2)))
    tr = sweep_trace(ds)
    assert tr.events == sum(tr.group_sizes)
    for m, c in zip(tr.mid_slopes, tr.counts):
        assert c == evaluate_auc_direction(ds, [m, 1.0]).satisfied_pairs


@pytest.mark.parametrize("kind", range(5))
def test_adversarial_matches_brute_force(rng, kind):
    for _ in range(20):
        ds = adversarial_2d(rng, kind)
        assert solve_2d(ds).satisfied_pairs == brute_force_2d(ds).satisfied_pairs


def test_large_coordinates():
    ds = Dataset.from_classes([[1e15, 1.0], [3e15, -2.0]], [[2e15, 0.5], [-1e15, 7.0]])
    assert solve_2d(ds).satisfied_pairs == brute_force_2d(ds).satisfied_pairs


grid = arrays(np.float64, st.tuples(st.integers(1, 7), st.just(2)), elements=st.integers(-3, 3).map(float))


@settings(max_examples=80, deadline=None)
@given(pos=grid, neg=grid)
def test_optimum_matches_brute_force(pos, neg):
    ds = Dataset.from_classes(pos, neg)
    res = solve_2d(ds)
    assert res.satisfied_pairs == brute_force_2d(ds).satisfied_pairs
    assert evaluate_auc_direction(ds, res.direction) == res.auc


@settings(max_examples=40, deadline=None)
@given(pos=grid, neg=grid, scale=st.sampled_from([0.25, 4.0, 1024.0]))
def test_optimum_scale_invariant(pos, neg, scale):
    a = solve_2d(Dataset.from_classes(pos, neg)).satisfied_pairs
    b = solve_2d(Dataset.from_classes(pos * scale, neg * scale)).satisfied_pairs
    assert a == b
