"""Repeated-split comparison of the exact solver against the baselines.

Each trial shuffles the dataset with a seed derived from ``(seed, trial)``,
splits it, standardizes both halves with training statistics, fits every
method on the training half and scores the learned direction by strict AUC
on both halves. Scores are kept as exact pair counts.

Report files written by :func:`write_report`
--------------------------------------------
``trials.csv``
    ``dataset,trial,split,method,satisfied,total,auc,status`` with one row
    per (dataset, trial, split, method). Failed cells have empty counts and
    ``status`` holding the reason.
``significance_<split>.csv``
    Square matrix; cell (I, J) is the number of datasets on which method I
    beats method J significantly (Welch t-test over the trial scores).
    Diagonal cells are empty.
``report.json``
    ``{"schema", "config", "datasets": [...], "significance": {split: ...},
    "mean_rank": {split: {method: rank}}}``. Each dataset entry carries its
    shape, per-trial pair counts, failures, chosen hyperparameters and
    per-method mean and standard deviation of AUC.
``roc/<dataset>__<method>.csv``
    Test-split ROC curve of the method's best trial by test AUC.

No timing information is written, so reruns with the same flags produce
byte-identical files.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, NamedTuple, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import stats

from .auc_metrics import roc_points
from .baselines import (
    L2_STRENGTHS,
    LEARNING_RATES,
    DivergenceError,
    FitConfig,
    cross_validate,
    fit_logistic,
    fit_pairwise,
)
from .core import Dataset, evaluate_auc_direction, linear_scores
from .data_io import split_shuffle, standardize
from .solver_nd import solve_nd

__all__ = [
    "METHODS",
    "TrialMatrix",
    "SignificanceCell",
    "SignificanceMatrix",
    "WelchResult",
    "trial_seed",
    "trial_split",
    "run_trials",
    "welch_t_test",
    "significance_matrix",
    "mean_rank",
    "compare_report",
    "write_report",
]

METHODS = ("exact", "lr", "b-lr", "pair-hinge", "pair-square")
SPLITS = ("train", "test")


def trial_seed(seed: int, trial: int) -> int:
    """Split seed for ``trial``; a 32-bit word drawn from ``SeedSequence([seed, trial])``."""
    return int(np.random.SeedSequence([seed, trial]).generate_state(1)[0])


def trial_split(
    dataset: Dataset,
    seed: int,
    trial: int,
    train_fraction: float = 0.5,
    stratified: bool = True,
) -> tuple[Dataset, Dataset]:
    """Standardized (train, test) pair used by ``trial`` of :func:`run_trials`."""
    train, test = split_shuffle(dataset, train_fraction, trial_seed(seed, trial), stratified)
    train, test, _ = standardize(train, test)
    return train, test


@dataclass(frozen=True, eq=False)
class TrialMatrix:
    """Per-trial strict AUC pair counts for every method.

    ``satisfied[split]`` has shape ``(trials, len(methods))`` and holds -1
    where the cell failed; ``total[split]`` has one pair total per trial
    (0 if the split itself failed). ``directions`` has shape
    ``(trials, len(methods), dim)`` with NaN rows for failed cells.
    """

    name: str
    methods: tuple[str, ...]
    trials: int
    seed: int
    dim: int
    satisfied: dict[str, NDArray[np.int64]]
    total: dict[str, NDArray[np.int64]]
    directions: NDArray[np.float64]
    failures: tuple[tuple[int, str, str], ...] = ()
    settings: tuple[tuple[int, str, dict], ...] = ()

    def scores(self, split: str = "train") -> NDArray[np.float64]:
        """AUC values, NaN where the trial or method failed."""
        sat = self.satisfied[split].astype(np.float64)
        tot = self.total[split].astype(np.float64)[:, None]
        with np.errstate(invalid="ignore", divide="ignore"):
            out = sat / tot
        out[(self.satisfied[split] < 0) | (tot == 0)] = np.nan
        return out

    def column(self, method: str, split: str = "train") -> NDArray[np.float64]:
        """Finite scores of one method, failed trials dropped."""
        col = self.scores(split)[:, self.methods.index(method)]
        return col[np.isfinite(col)]

    def ok(self) -> NDArray[np.bool_]:
        return (self.satisfied["train"] >= 0) & (self.satisfied["test"] >= 0)


def _fit_direction(method: str, train: Dataset, *, seed: int, epochs: int, threads: int | None):
    if method == "exact":
        return solve_nd(train, threads=threads).direction, {}
    base = FitConfig(epochs=epochs, seed=seed, balanced=(method == "b-lr"))
    if method in ("lr", "b-lr"):
        fit = fit_logistic
    elif method in ("pair-hinge", "pair-square"):
        loss = method.split("-", 1)[1]

        def fit(ds, cfg, _loss=loss):
            return fit_pairwise(ds, _loss, cfg)

    else:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    cfg, _ = cross_validate(train, fit, base, 5, LEARNING_RATES, L2_STRENGTHS)
    model = fit(train, cfg)
    return model.direction, {"learning_rate": cfg.learning_rate, "l2_strength": cfg.l2_strength}


def _strict_count(dataset: Dataset, w: NDArray[np.float64]) -> int:
    # an all-zero weight vector ties every pair, which is a valid (poor) ranker
    if not np.any(w != 0.0):
        return 0
    return evaluate_auc_direction(dataset, w).satisfied_pairs


def _run_one(dataset, methods, k, seed, train_fraction, stratified, epochs, threads):
    M = len(methods)
    row = {
        "satisfied": {s: np.full(M, -1, np.int64) for s in SPLITS},
        "total": {s: 0 for s in SPLITS},
        "directions": np.full((M, dataset.dim), np.nan),
        "failures": [],
        "settings": [],
    }
    try:
        train, test = trial_split(dataset, seed, k, train_fraction, stratified)
    except ValueError as exc:
        row["failures"].append((k, "*", str(exc)))
        return row
    row["total"] = {"train": train.total_pairs, "test": test.total_pairs}
    for m, method in enumerate(methods):
        try:
            w, chosen = _fit_direction(
                method, train, seed=trial_seed(seed, k), epochs=epochs, threads=threads
            )
        except (DivergenceError, ValueError, np.linalg.LinAlgError) as exc:
            row["failures"].append((k, method, f"{type(exc).__name__}: {exc}"))
            continue
        row["directions"][m] = w
        row["satisfied"]["train"][m] = _strict_count(train, w)
        row["satisfied"]["test"][m] = _strict_count(test, w)
        if chosen:
            row["settings"].append((k, method, chosen))
    return row


def run_trials(
    dataset: Dataset,
    methods: Sequence[str] = METHODS,
    trials: int = 20,
    seed: int = 0,
    *,
    name: str = "dataset",
    train_fraction: float = 0.5,
    stratified: bool = True,
    epochs: int = 100,
    threads: int | None = None,
    workers: int = 1,
) -> TrialMatrix:
    """Fit and score every method on ``trials`` seeded splits of ``dataset``.

    Parameters
    ----------
    methods
        Names from :data:`METHODS`. ``exact`` runs the 2D sweep or the
        recursive solver depending on the dimension.
    epochs
        Epoch budget of the gradient baselines, both during cross-validation
        and for the final fit.
    threads
        Worker threads for the exact solver in three or more dimensions.
    workers
        Trials evaluated concurrently. Results are addressed by trial index,
        so the matrix does not depend on this value.

    Failures (a split that loses a class, a diverging fit) are recorded in
    ``failures`` and leave -1 in the affected cells; they never abort the run.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    methods = tuple(methods)
    if not methods:
        raise ValueError("methods must be nonempty")
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ValueError(f"unknown method {unknown[0]!r}; choose from {', '.join(METHODS)}")
    if len(set(methods)) != len(methods):
        raise ValueError("methods must be distinct")

    def job(k):
        return _run_one(dataset, methods, k, seed, train_fraction, stratified, epochs, threads)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(job, range(trials)))
    else:
        rows = [job(k) for k in range(trials)]

    return TrialMatrix(
        name=name,
        methods=methods,
        trials=trials,
        seed=seed,
        dim=dataset.dim,
        satisfied={s: np.stack([r["satisfied"][s] for r in rows]) for s in SPLITS},
        total={s: np.array([r["total"][s] for r in rows], dtype=np.int64) for s in SPLITS},
        directions=np.stack([r["directions"] for r in rows]),
        failures=tuple(f for r in rows for f in r["failures"]),
        settings=tuple(s for r in rows for s in r["settings"]),
    )


class WelchResult(NamedTuple):
    significant: bool
    p_value: float
    direction: int
    statistic: float
    df: float


def welch_t_test(a: ArrayLike, b: ArrayLike, alpha: float = 0.05) -> WelchResult:
    """Two-sided unequal-variance t-test.

    ``t = (mean(a) - mean(b)) / sqrt(var(a)/n_a + var(b)/n_b)`` with sample
    variances and Welch-Satterthwaite degrees of freedom. Significant means
    ``p < alpha``; ``direction`` is the sign of ``mean(a) - mean(b)``.

    When both samples are constant the statistic is undefined: equal
    constants give ``p = 1`` (not significant) and different constants give
    ``p = 0`` (significant).

    Examples
    --------
    >>> welch_t_test([0.9, 0.91, 0.89], [0.5, 0.51, 0.49]).direction
    1
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise ValueError("each sample needs at least 2 values")
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    if np.all(a == a[0]) and np.all(b == b[0]):
        # checked on the values: the mean of a constant sample can carry rounding noise
        if a[0] == b[0]:
            return WelchResult(False, 1.0, 0, 0.0, math.nan)
        sign = 1 if a[0] > b[0] else -1
        return WelchResult(True, 0.0, sign, math.copysign(math.inf, sign), math.nan)
    ma, mb = float(a.mean()), float(b.mean())
    direction = int(np.sign(ma - mb))
    qa = a.var(ddof=1) / a.size
    qb = b.var(ddof=1) / b.size
    se2 = qa + qb
    t = (ma - mb) / math.sqrt(se2)
    df = se2**2 / (qa**2 / (a.size - 1) + qb**2 / (b.size - 1))
    p = float(min(1.0, 2.0 * stats.t.sf(abs(t), df)))
    return WelchResult(p < alpha, p, direction, float(t), float(df))


@dataclass(frozen=True)
class SignificanceCell:
    wins: int
    alpha: float

    def __post_init__(self) -> None:
        if self.wins < 0:
            raise ValueError("wins must be nonnegative")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")


@dataclass(frozen=True, eq=False)
class SignificanceMatrix:
    """Win counts; ``wins[i, j]`` datasets where method i beats method j.

    The diagonal is stored as 0 but reported as empty.
    """

    methods: tuple[str, ...]
    alpha: float
    split: str
    wins: NDArray[np.int64]
    datasets: tuple[str, ...] = ()

    def cell(self, i: str | int, j: str | int) -> SignificanceCell | None:
        i = self.methods.index(i) if isinstance(i, str) else i
        j = self.methods.index(j) if isinstance(j, str) else j
        if i == j:
            return None
        return SignificanceCell(int(self.wins[i, j]), self.alpha)

    def to_csv(self) -> str:
        lines = [",".join(["method", *self.methods])]
        for i, name in enumerate(self.methods):
            cells = ["" if i == j else str(int(self.wins[i, j])) for j in range(len(self.methods))]
            lines.append(",".join([name, *cells]))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "split": self.split,
            "methods": list(self.methods),
            "wins": [
                [None if i == j else int(self.wins[i, j]) for j in range(len(self.methods))]
                for i in range(len(self.methods))
            ],
        }


def significance_matrix(
    trial_matrices: Mapping[str, TrialMatrix] | Sequence[TrialMatrix],
    alpha: float = 0.05,
    split: str = "train",
) -> SignificanceMatrix:
    """Count, per method pair, the datasets with a significant positive difference.

    Each dataset contributes one Welch test per ordered pair, pooling that
    method's scores over all successful trials. Pairs with fewer than two
    scores on either side are never significant.
    """
    if isinstance(trial_matrices, Mapping):
        items = list(trial_matrices.values())
    else:
        items = list(trial_matrices)
    if not items:
        raise ValueError("no trial matrices")
    methods = items[0].methods
    for tm in items[1:]:
        if tm.methods != methods:
            raise ValueError(f"inconsistent method lists: {methods} vs {tm.methods} ({tm.name})")
    M = len(methods)
    wins = np.zeros((M, M), dtype=np.int64)
    for tm in items:
        cols = [tm.column(m, split) for m in methods]
        for i in range(M):
            for j in range(i + 1, M):
                if cols[i].size < 2 or cols[j].size < 2:
                    continue
                res = welch_t_test(cols[i], cols[j], alpha)
                if res.significant and res.direction > 0:
                    wins[i, j] += 1
                elif res.significant and res.direction < 0:
                    wins[j, i] += 1
    return SignificanceMatrix(methods, alpha, split, wins, tuple(tm.name for tm in items))


def mean_rank(scores: ArrayLike) -> NDArray[np.float64]:
    """Average rank of each method; rows are datasets, columns methods.

    Rank 1 is the highest score and ties share the mean of their ranks.

    Examples
    --------
    >>> mean_rank([[0.9, 0.9, 0.7]]).tolist()
    [1.5, 1.5, 3.0]
    """
    S = np.atleast_2d(np.asarray(scores, dtype=np.float64))
    if S.shape[1] < 2 or S.shape[0] < 1:
        raise ValueError("need at least 2 methods and 1 dataset")
    ranks = np.vstack([stats.rankdata(-row, method="average") for row in S])
    return ranks.mean(axis=0)


# ---------------------------------------------------------------- reports


def trials_csv(matrices: Sequence[TrialMatrix]) -> str:
    lines = ["dataset,trial,split,method,satisfied,total,auc,status"]
    for tm in matrices:
        reasons = {(k, m): r for k, m, r in tm.failures}
        for k in range(tm.trials):
            for split in SPLITS:
                tot = int(tm.total[split][k])
                for m, method in enumerate(tm.methods):
                    sat = int(tm.satisfied[split][k, m])
                    if sat < 0:
                        why = reasons.get((k, method), reasons.get((k, "*"), "failed"))
                        why = why.replace(",", ";").replace("\n", " ")
                        lines.append(f"{tm.name},{k},{split},{method},,,,{why}")
                    else:
                        lines.append(f"{tm.name},{k},{split},{method},{sat},{tot},{sat / tot!r},ok")
    return "\n".join(lines) + "\n"


def _summary(tm: TrialMatrix) -> dict:
    out = {}
    for split in SPLITS:
        out[split] = {}
        for method in tm.methods:
            col = tm.column(method, split)
            out[split][method] = {
                "mean": float(col.mean()) if col.size else None,
                "std": float(col.std(ddof=1)) if col.size > 1 else None,
                "trials_ok": int(col.size),
            }
    return out


def compare_report(
    matrices: Sequence[TrialMatrix], alpha: float = 0.05, config: dict | None = None
) -> dict:
    """JSON-ready report of a comparison run; see the module docstring."""
    datasets = []
    for tm in matrices:
        trials = []
        for k in range(tm.trials):
            entry = {"trial": k, "seed": trial_seed(tm.seed, k)}
            for split in SPLITS:
                entry[split] = {
                    "total": int(tm.total[split][k]),
                    "satisfied": {
                        m: (None if tm.satisfied[split][k, j] < 0 else int(tm.satisfied[split][k, j]))
                        for j, m in enumerate(tm.methods)
                    },
                }
            trials.append(entry)
        datasets.append(
            {
                "name": tm.name,
                "dim": tm.dim,
                "trials": trials,
                "failures": [{"trial": k, "method": m, "reason": r} for k, m, r in tm.failures],
                "hyperparameters": [
                    {"trial": k, "method": m, **cfg} for k, m, cfg in tm.settings
                ],
                "summary": _summary(tm),
            }
        )
    report = {
        "schema": "exactauc.compare/1",
        "config": dict(config or {}),
        "methods": list(matrices[0].methods) if matrices else [],
        "datasets": datasets,
        "significance": {},
        "mean_rank": {},
    }
    if matrices:
        for split in SPLITS:
            report["significance"][split] = significance_matrix(matrices, alpha, split).to_json()
            means = np.array([[_nanmean(tm.scores(split)[:, j]) for j in range(len(tm.methods))]
                              for tm in matrices])
            if len(matrices[0].methods) >= 2 and np.all(np.isfinite(means)):
                ranks = mean_rank(means)
                report["mean_rank"][split] = dict(zip(matrices[0].methods, map(float, ranks)))
    return report


def _nanmean(x: NDArray[np.float64]) -> float:
    x = x[np.isfinite(x)]
    return float(x.mean()) if x.size else math.nan


def best_trial_rocs(
    matrix: TrialMatrix,
    dataset: Dataset,
    train_fraction: float = 0.5,
    stratified: bool = True,
) -> dict[str, str]:
    """Test-split ROC CSV text for each method's best trial by test AUC."""
    out = {}
    test_scores = matrix.scores("test")
    for j, method in enumerate(matrix.methods):
        col = test_scores[:, j]
        if not np.any(np.isfinite(col)):
            continue
        k = int(np.nanargmax(col))  # first maximum on ties
        _, test = trial_split(dataset, matrix.seed, k, train_fraction, stratified)
        s = linear_scores(test.X, matrix.directions[k, j])
        out[method] = roc_points(s[test.y == 1], s[test.y == -1]).to_csv()
    return out


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def write_report(
    directory: str | Path,
    matrices: Sequence[TrialMatrix],
    datasets: Mapping[str, Dataset],
    alpha: float = 0.05,
    config: dict | None = None,
    *,
    train_fraction: float = 0.5,
    stratified: bool = True,
) -> list[Path]:
    """Write the comparison artifacts into ``directory`` and return their paths."""
    directory = Path(directory)
    files: dict[Path, str] = {directory / "trials.csv": trials_csv(matrices)}
    for split in SPLITS:
        sm = significance_matrix(matrices, alpha, split)
        files[directory / f"significance_{split}.csv"] = sm.to_csv()
    report = compare_report(matrices, alpha, config)
    files[directory / "report.json"] = json.dumps(report, indent=2, sort_keys=False) + "\n"
    for tm in matrices:
        for method, text in best_trial_rocs(tm, datasets[tm.name], train_fraction, stratified).items():
            files[directory / "roc" / f"{tm.name}__{method}.csv"] = text
    for path, text in files.items():
        _atomic_write(path, text)
    return sorted(files)
