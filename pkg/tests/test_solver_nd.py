import numpy as np
import pytest
from instances import adversarial_2d, embed_3d, gaussian, lifted_xor

from exactauc.core import Dataset, evaluate_auc_direction
from exactauc.oracles import sample_directions_oracle, vertex_oracle_3d
from exactauc.solver_nd import (
    lift_direction,
    orthonormal_complement,
    project_onto_hyperplane,
    reduce_coordinates,
    refine_by_perturbation,
    solve_nd,
)
from exactauc.sweep2d import solve_2d


def _project(x, u):
    ds = Dataset(np.array([x], float), [1])
    return project_onto_hyperplane(ds, u).X[0]


def test_projection_examples():
    assert np.allclose(_project([1, 1, 0], [0, 0, 1]), [1, 1, 0])
    assert np.allclose(_project([0, 0, 5], [0, 0, 1]), [0, 0, 0])
    p = _project([1, 2, 3], [1, 1, 1])
    assert np.allclose(p, [-1, 0, 1])
    assert abs(p @ np.ones(3)) < 1e-12


def test_reduce_drops_normal_axis():
    basis = orthonormal_complement([0, 0, 1])
    ds = Dataset(np.array([[2.0, -3.0, 0.0]]), [1])
    red = reduce_coordinates(ds, basis)
    assert red.dim == 2
    # basis spans e1, e2 up to sign and order
    assert sorted(np.abs(red.X[0])) == [2.0, 3.0]


def test_reduce_preserves_inner_products(rng):
    for d in (3, 4):
        u = rng.standard_normal(d)
        basis = orthonormal_complement(u)
        ds = project_onto_hyperplane(Dataset(rng.standard_normal((6, d)), np.ones(6, int)), u)
        red = reduce_coordinates(ds, basis)
        assert red.dim == d - 1
        assert np.allclose(red.X @ red.X.T, ds.X @ ds.X.T, atol=1e-9)


def test_reduce_rejects_off_plane_points():
    basis = orthonormal_complement([0, 0, 1])
    with pytest.raises(ValueError, match="not on the hyperplane"):
        reduce_coordinates(Dataset(np.array([[0.0, 1.0, 1.0]]), [1]), basis)


def test_lift_and_round_trip(rng):
    basis = orthonormal_complement([0, 0, 1])
    lifted = lift_direction(basis, [1, 0])
    assert lifted[2] == 0 and np.isclose(np.linalg.norm(lifted), 1.0)
    u = rng.standard_normal(3)
    basis = orthonormal_complement(u)
    w = project_onto_hyperplane(Dataset(rng.standard_normal((1, 3)), [1]), u).X[0]
    low = w @ basis.basis.T
    assert np.allclose(lift_direction(basis, low), w, atol=1e-9)
    p = rng.standard_normal(3)
    assert np.isclose(p @ lift_direction(basis, low), (basis.basis @ p) @ low)


def test_complement_bases_are_orthonormal(rng):
    for d in (2, 3, 4, 5):
        for u in [rng.standard_normal(d), np.eye(d)[0], -np.eye(d)[d - 1], np.ones(d)]:
            orthonormal_complement(u).check()


def test_refine_unties_single_pair():
    ds = Dataset.from_classes([[0, 0, 1]], [[0, 0, 0]])
    w = refine_by_perturbation(ds, [1.0, 0.0, 0.0], [0, 0, 1])
    assert w[2] > 0
    assert evaluate_auc_direction(ds, w).value == 1.0


def test_refine_keeps_strict_candidate():
    ds = Dataset.from_classes([[2, 0, 0]], [[0, 0, 0]])
    w = refine_by_perturbation(ds, [1.0, 0.0, 0.0], [0, 0, 1])
    assert evaluate_auc_direction(ds, w).value == 1.0


def test_refine_never_worse(rng):
    for _ in range(30):
        ds = gaussian(rng, 3, 6)
        cand = rng.standard_normal(3)
        normal = rng.standard_normal(3)
        before = evaluate_auc_direction(ds, cand).satisfied_pairs
        after = evaluate_auc_direction(ds, refine_by_perturbation(ds, cand, normal)).satisfied_pairs
        assert after >= before


def test_single_pair_3d():
    assert solve_nd(Dataset.from_classes([[0, 0, 1]], [[0, 0, 0]])).auc.value == 1.0


def test_lifted_xor():
    res = solve_nd(lifted_xor(), 3)
    assert res.auc.value == 1.0
    shadow = Dataset(lifted_xor().X[:, :2], lifted_xor().y)
    assert solve_2d(shadow).auc.value == 0.5


def test_embedded_2d_matches_planar(rng):
    for k in range(8):
        flat = gaussian(rng, 2, 6) if k % 2 else adversarial_2d(rng, k % 5)
        assert solve_nd(embed_3d(flat)).satisfied_pairs == solve_2d(flat).satisfied_pairs


def test_matches_vertex_oracle(rng):
    for _ in range(25):
        ds = gaussian(rng, 3, 6)
        assert solve_nd(ds).satisfied_pairs == vertex_oracle_3d(ds).satisfied_pairs


def test_reported_auc_is_achieved(rng):
    for d in (3, 4):
        ds = gaussian(rng, d, 4)
        res = solve_nd(ds)
        assert evaluate_auc_direction(ds, res.direction) == res.auc


def test_4d_dominates_sampling(rng):
    ds = gaussian(rng, 4, 4)
    assert solve_nd(ds).satisfied_pairs >= sample_directions_oracle(ds, 5000, 3).satisfied_pairs


def test_threads_do_not_change_result(rng):
    ds = gaussian(rng, 3, 6)
    a = solve_nd(ds, threads=1)
    b = solve_nd(ds, threads=3)
    assert a.auc == b.auc and np.array_equal(a.direction, b.direction)


def test_env_default_threads(monkeypatch):
    from exactauc.solver_nd import default_threads

    monkeypatch.setenv("EXACTAUC_THREADS", "3")
    assert default_threads() == 3
    monkeypatch.setenv("EXACTAUC_THREADS", "many")
    assert default_threads() == 1


def test_dimension_errors():
    ds = Dataset.from_classes([[0, 0, 1]], [[0, 0, 0]])
    with pytest.raises(ValueError):
        solve_nd(ds, 2)
    with pytest.raises(ValueError):
        solve_nd(Dataset.from_classes([[1.0]], [[0.0]]))
    with pytest.raises(ValueError):
        solve_nd(Dataset.from_classes(np.ones((1, 5)), np.zeros((1, 5))))


def test_two_dimensions_delegate_to_sweep():
    ds = Dataset.from_classes([[0, 0], [1, 1]], [[0, 1], [1, 0]])
    assert str(solve_nd(ds).auc) == "2/4"
