import numpy as np
import pytest

from exactauc.core import evaluate_auc_direction
from exactauc.hemisphere import (
    HemisphereInstance,
    hemisphere_count,
    hemisphere_to_lao,
    max_hemisphere_exhaustive,
    random_hemisphere_instance,
    read_instance,
    verify_feasibility,
    write_instance,
)
from exactauc.solver_nd import solve_nd

K2 = HemisphereInstance(np.array([[1.0, 0.0], [0.0, 1.0]]), 2)


def test_construction_places_negative_at_origin():
    ds, t = hemisphere_to_lao(K2)
    assert t == 2
    assert np.array_equal(ds.positives, [[1, 0], [0, 1]])
    assert np.array_equal(ds.negatives, [[0, 0]])


def test_single_vector_instance():
    ds, t = hemisphere_to_lao(HemisphereInstance(np.array([[1.0, 0.0]]), 1))
    assert ds.total_pairs == 1 and t == 1
    assert verify_feasibility(ds, [1, 0], t)


def test_verifier_examples():
    ds, _ = hemisphere_to_lao(K2)
    assert verify_feasibility(ds, [1, 1], 2)
    assert not verify_feasibility(ds, [1, -1], 2)
    assert evaluate_auc_direction(ds, [1, -1]).satisfied_pairs == 1
    assert verify_feasibility(ds, [1, -1], 0)


def test_counts_agree_under_any_anchor(rng):
    inst = random_hemisphere_instance(9, 3, rng)
    for anchor in (None, rng.standard_normal(3)):
        ds, _ = hemisphere_to_lao(inst, anchor)
        for w in rng.standard_normal((100, 3)):
            assert evaluate_auc_direction(ds, w).satisfied_pairs == hemisphere_count(inst.points, w)


def test_exhaustive_matches_solver(rng):
    for d in (2, 3):
        inst = random_hemisphere_instance(7, d, rng)
        ds, _ = hemisphere_to_lao(inst)
        assert max_hemisphere_exhaustive(inst.points) == solve_nd(ds).satisfied_pairs


def test_exhaustive_antipodal():
    pts = np.array([[1.0, 0.0], [-1.0, 0.0]])
    assert max_hemisphere_exhaustive(pts) == 1


def test_instance_validation():
    with pytest.raises(ValueError, match="norm"):
        HemisphereInstance(np.array([[2.0, 0.0]]), 1)
    with pytest.raises(ValueError, match="threshold"):
        HemisphereInstance(np.array([[1.0, 0.0]]), 2)


def test_instance_file_round_trip(tmp_path, rng):
    inst = random_hemisphere_instance(5, 3, rng, threshold=4)
    path = tmp_path / "inst.csv"
    write_instance(path, inst)
    back = read_instance(path)
    assert np.array_equal(back.points, inst.points) and back.threshold == 4
