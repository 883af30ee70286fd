import json

import numpy as np
import pytest
from scipy import stats

from exactauc.core import Dataset
from exactauc.datasets import load_bundled
from exactauc.experiments import (
    TrialMatrix,
    compare_report,
    mean_rank,
    run_trials,
    significance_matrix,
    trial_seed,
    welch_t_test,
    write_report,
)


def _synthetic(name, columns):
    """TrialMatrix whose train scores are the given columns (out of 1000 pairs)."""
    cols = np.array(columns, dtype=float).T
    sat = np.round(cols * 1000).astype(np.int64)
    T, M = sat.shape
    return TrialMatrix(
        name=name,
        methods=tuple(f"m{j}" for j in range(M)),
        trials=T,
        seed=0,
        dim=2,
        satisfied={"train": sat, "test": sat.copy()},
        total={"train": np.full(T, 1000), "test": np.full(T, 1000)},
        directions=np.ones((T, M, 2)),
    )


def test_welch_identical_samples():
    a = [0.1, 0.4, 0.3, 0.2]
    res = welch_t_test(a, a)
    assert not res.significant and res.direction == 0


def test_welch_clear_difference_matches_reference(rng):
    a = 0.9 + 0.01 * rng.standard_normal(200)
    b = 0.5 + 0.01 * rng.standard_normal(200)
    res = welch_t_test(a, b)
    ref = stats.ttest_ind(a, b, equal_var=False)
    assert res.significant and res.direction == 1
    assert res.statistic == pytest.approx(ref.statistic, rel=1e-12)


def test_welch_p_values_match_reference(rng):
    for _ in range(50):
        a = rng.normal(0, rng.uniform(0.5, 2), rng.integers(2, 30))
        b = rng.normal(rng.uniform(-1, 1), rng.uniform(0.5, 2), rng.integers(2, 30))
        ref = stats.ttest_ind(a, b, equal_var=False)
        assert abs(welch_t_test(a, b).p_value - ref.pvalue) <= 1e-9


def test_welch_swap_symmetry(rng):
    a, b = rng.normal(0, 1, 15), rng.normal(0.8, 1, 12)
    x, y = welch_t_test(a, b), welch_t_test(b, a)
    assert x.significant == y.significant and x.direction == -y.direction


def test_welch_constant_samples():
    assert welch_t_test([0.5, 0.5], [0.5, 0.5])[:3] == (False, 1.0, 0)
    res = welch_t_test([0.7, 0.7, 0.7], [0.5, 0.5])
    assert res.significant and res.p_value == 0.0 and res.direction == 1


def test_welch_needs_two_values():
    with pytest.raises(ValueError):
        welch_t_test([1.0], [1.0, 2.0])


def test_significance_single_dominant_method(rng):
    noise = lambda: 0.01 * rng.standard_normal(20)  # noqa: E731
    tm = _synthetic("d", [0.9 + noise(), 0.5 + noise(), 0.5 + noise()])
    sm = significance_matrix([tm])
    assert sm.wins[0, 1] == sm.wins[0, 2] == 1
    assert sm.wins[1:, :].sum() == 0
    assert sm.cell(0, 0) is None and sm.cell("m0", "m1").wins == 1


def test_significance_identical_methods():
    col = np.linspace(0.4, 0.6, 10)
    sm = significance_matrix({"a": _synthetic("a", [col, col]), "b": _synthetic("b", [col, col])})
    assert sm.wins.sum() == 0


def test_significance_direction_exclusive(rng):
    for k in range(6):
        tm = _synthetic(f"d{k}", [rng.uniform(0.4, 0.9, 12) + 0.1 * j for j in range(4)])
        sm = significance_matrix([tm])
        assert not np.any((sm.wins > 0) & (sm.wins.T > 0))


def test_significance_rejects_mixed_methods():
    a = _synthetic("a", [[0.1, 0.2], [0.3, 0.4]])
    b = _synthetic("b", [[0.1, 0.2], [0.3, 0.4], [0.5, 0.6]])
    with pytest.raises(ValueError, match="inconsistent"):
        significance_matrix([a, b])


def test_significance_csv_has_empty_diagonal():
    sm = significance_matrix([_synthetic("a", [[0.5, 0.6], [0.5, 0.6]])])
    assert sm.to_csv() == "method,m0,m1\nm0,,0\nm1,0,\n"


def test_mean_rank_examples():
    assert mean_rank([[0.9, 0.8, 0.7]]).tolist() == [1, 2, 3]
    assert mean_rank([[0.9, 0.9, 0.7]]).tolist() == [1.5, 1.5, 3]
    assert mean_rank([[0.9, 0.8], [0.8, 0.9]]).tolist() == [1.5, 1.5]


def test_trial_seed_is_stable():
    assert trial_seed(1, 0) == trial_seed(1, 0) != trial_seed(1, 1)


def test_exact_on_separable_data():
    ds = Dataset.from_classes([[1.0, 1.0], [2.0, 1.5], [1.5, 2.0]], [[-1.0, 0.0], [0.0, -1.0], [-1.0, -1.5]])
    tm = run_trials(ds, ["exact"], 1, 0)
    assert tm.scores("train")[0, 0] == 1.0


def test_run_trials_is_deterministic():
    ds = load_bundled("xor")
    a = run_trials(ds, ["exact", "lr"], 2, 4, epochs=5)
    b = run_trials(ds, ["exact", "lr"], 2, 4, epochs=5)
    for split in ("train", "test"):
        assert np.array_equal(a.satisfied[split], b.satisfied[split])
    assert np.array_equal(a.directions, b.directions)


def test_exact_dominates_logistic_on_xor():
    tm = run_trials(load_bundled("xor"), ["exact", "lr"], 4, 1, epochs=10)
    sc = tm.scores("train")
    assert np.all(sc[:, 0] >= sc[:, 1])


def test_workers_do_not_change_matrix():
    ds = load_bundled("moons")
    a = run_trials(ds, ["exact"], 3, 2)
    b = run_trials(ds, ["exact"], 3, 2, workers=3)
    assert np.array_equal(a.satisfied["test"], b.satisfied["test"])


def test_failed_split_is_recorded():
    ds = Dataset.from_classes([[1.0, 0.0]], [[0.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    tm = run_trials(ds, ["exact"], 2, 0)
    assert len(tm.failures) == 2 and tm.failures[0][1] == "*"
    assert np.all(np.isnan(tm.scores("train")))


def test_unknown_method():
    with pytest.raises(ValueError, match="unknown method"):
        run_trials(load_bundled("xor"), ["svm"], 1, 0)


def test_report_files(tmp_path):
    ds = load_bundled("xor")
    tm = run_trials(ds, ["exact", "lr"], 2, 0, name="xor", epochs=3)
    paths = write_report(tmp_path, [tm], {"xor": ds}, 0.05, {"seed": 0})
    names = {p.relative_to(tmp_path).as_posix() for p in paths}
    assert {"trials.csv", "report.json", "significance_train.csv", "roc/xor__exact.csv"} <= names
    report = json.loads((tmp_path / "report.json").read_text())
    assert report == json.loads(json.dumps(compare_report([tm], 0.05, {"seed": 0})))
    assert report["datasets"][0]["trials"][0]["train"]["total"] == int(tm.total["train"][0])
    rows = (tmp_path / "trials.csv").read_text().splitlines()
    assert len(rows) == 1 + 2 * 2 * 2
