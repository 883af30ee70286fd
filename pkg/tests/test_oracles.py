import numpy as np
import pytest
from instances import embed_3d, gaussian, lifted_xor

from exactauc.core import Dataset
from exactauc.oracles import brute_force_2d, sample_directions_oracle, vertex_oracle_3d
from exactauc.solver_nd import solve_nd

XOR = Dataset.from_classes([[0, 0], [1, 1]], [[0, 1], [1, 0]])


def test_brute_force_examples():
    assert brute_force_2d(XOR).auc.value == 0.5
    assert brute_force_2d(Dataset.from_classes([[0, 1]], [[0, 0]])).auc.value == 1.0
    assert brute_force_2d(Dataset.from_classes([[1, 0], [0, 1]], [[0.5, 0.5]])).auc.value == 0.5


def test_sampling_is_deterministic_and_a_lower_bound(rng):
    ds = gaussian(rng, 3, 6)
    a = sample_directions_oracle(ds, 500, 9)
    b = sample_directions_oracle(ds, 500, 9)
    assert a.auc == b.auc and np.array_equal(a.direction, b.direction)
    assert a.satisfied_pairs <= solve_nd(ds).satisfied_pairs


def test_sampling_single_pair_3d():
    ds = Dataset.from_classes([[0, 0, 1]], [[0, 0, 0]])
    assert sample_directions_oracle(ds, 100, 0).auc.value == 1.0


def test_vertex_oracle_examples(rng):
    assert vertex_oracle_3d(Dataset.from_classes([[0, 0, 1]], [[0, 0, 0]])).auc.value == 1.0
    assert vertex_oracle_3d(lifted_xor()).auc.value == 1.0
    flat = gaussian(rng, 2, 5)
    assert vertex_oracle_3d(embed_3d(flat)).satisfied_pairs == brute_force_2d(flat).satisfied_pairs


def test_vertex_oracle_guards():
    with pytest.raises(ValueError):
        vertex_oracle_3d(Dataset.from_classes([[0, 1]], [[0, 0]]))
    big = Dataset.from_classes(np.ones((9, 3)), np.zeros((9, 3)))
    with pytest.raises(ValueError, match="guard"):
        vertex_oracle_3d(big)
