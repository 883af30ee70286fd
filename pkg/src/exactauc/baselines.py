"""Approximate linear rankers used as comparison baselines.

* Logistic regression by full-batch gradient descent, optionally with
  balanced class weights ``n / (2 n_pos)`` and ``n / (2 n_neg)``.
* Pairwise surrogate AUC maximization by stochastic gradient descent over
  uniformly drawn (positive, negative) pairs, with hinge or square loss.

Hyperparameters are picked by stratified k-fold cross-validation on a small
grid, scoring folds by strict validation AUC.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import product
from typing import Callable, Literal

import numpy as np
from numpy.typing import NDArray

from .auc_metrics import auc_from_scores
from .core import Dataset
from .data_io import trial_rng

__all__ = [
    "DivergenceError",
    "FitConfig",
    "FittedModel",
    "balanced_weights",
    "logistic_objective",
    "pairwise_objective",
    "fit_logistic",
    "fit_pairwise",
    "cross_validate",
    "LEARNING_RATES",
    "L2_STRENGTHS",
]

LEARNING_RATES = (1e-1, 1e-2, 1e-3)
L2_STRENGTHS = (0.0, 1e-4, 1e-2, 1.0)

PairLoss = Literal["hinge", "square"]


class DivergenceError(ArithmeticError):
    """Training produced a non-finite loss."""

    def __init__(self, epoch: int, loss: float):
        super().__init__(f"loss became {loss!r} at epoch {epoch}")
        self.epoch = epoch
        self.loss = loss


@dataclass(frozen=True)
class FitConfig:
    learning_rate: float = 0.1
    epochs: int = 100
    l2_strength: float = 0.0
    seed: int = 0
    balanced: bool = False
    batch_size: int = 32
    init: Literal["zeros", "random"] = "zeros"

    def __post_init__(self) -> None:
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be at least 1")
        if self.l2_strength < 0:
            raise ValueError("l2_strength must be nonnegative")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")


@dataclass(frozen=True, eq=False)
class FittedModel:
    direction: NDArray[np.float64]
    bias: float
    training_loss_trace: list[float] = field(default_factory=list)
    config: FitConfig | None = None

    def decision_function(self, X: NDArray[np.float64]) -> NDArray[np.float64]:
        return X @ self.direction + self.bias


def balanced_weights(y: NDArray[np.int64]) -> NDArray[np.float64]:
    """Per-sample weights ``n / (2 n_pos)`` for positives and ``n / (2 n_neg)`` for negatives."""
    y = np.asarray(y)
    n = y.size
    n_pos = int(np.count_nonzero(y == 1))
    n_neg = n - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("balanced weights need both classes")
    return np.where(y == 1, n / (2.0 * n_pos), n / (2.0 * n_neg))


def logistic_objective(
    theta: NDArray[np.float64],
    X: NDArray[np.float64],
    y: NDArray[np.int64],
    sample_weight: NDArray[np.float64] | None = None,
    l2: float = 0.0,
) -> tuple[float, NDArray[np.float64]]:
    """Weighted mean logistic loss plus ``l2 / 2 * |w|^2`` and its gradient.

    ``theta`` is ``[w_1, ..., w_d, b]``; the bias is not regularized.
    """
    w, b = theta[:-1], theta[-1]
    c = np.ones(y.shape[0]) if sample_weight is None else sample_weight
    margin = y * (X @ w + b)
    loss = float(c @ np.logaddexp(0.0, -margin) / c.sum() + 0.5 * l2 * (w @ w))
    # d/dz log(1 + exp(-z)) = -sigmoid(-z)
    coef = -c * y * _sigmoid(-margin) / c.sum()
    grad = np.empty_like(theta)
    grad[:-1] = X.T @ coef + l2 * w
    grad[-1] = coef.sum()
    return loss, grad


def _sigmoid(z: NDArray[np.float64]) -> NDArray[np.float64]:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def pairwise_objective(
    w: NDArray[np.float64],
    diffs: NDArray[np.float64],
    loss: PairLoss,
    l2: float = 0.0,
) -> tuple[float, NDArray[np.float64]]:
    """Mean pair loss over rows ``x_i^+ - x_j^-`` plus ``l2 / 2 * |w|^2``, with gradient.

    hinge: ``max(0, 1 - w . diff)``; square: ``(1 - w . diff)^2``. The hinge
    gradient uses the zero subgradient at the kink.
    """
    r = 1.0 - diffs @ w
    m = diffs.shape[0]
    if loss == "hinge":
        active = r > 0
        value = float(np.sum(r[active]) / m)
        grad = -diffs[active].sum(axis=0) / m
    elif loss == "square":
        value = float(r @ r / m)
        grad = -2.0 * (diffs.T @ r) / m
    else:
        raise ValueError(f"unknown pair loss {loss!r}")
    return value + 0.5 * l2 * float(w @ w), grad + l2 * w


def _init(dim: int, config: FitConfig) -> NDArray[np.float64]:
    if config.init == "zeros":
        return np.zeros(dim)
    return trial_rng(config.seed, 1).normal(scale=0.01, size=dim)


def fit_logistic(dataset: Dataset, config: FitConfig) -> FittedModel:
    """L2-regularized logistic regression by full-batch gradient descent."""
    dataset.require_both_classes()
    X, y = dataset.X, dataset.y
    c = balanced_weights(y) if config.balanced else None
    theta = _init(dataset.dim + 1, config)
    trace = []
    for epoch in range(config.epochs):
        loss, grad = logistic_objective(theta, X, y, c, config.l2_strength)
        if not np.isfinite(loss) or not np.all(np.isfinite(grad)):
            raise DivergenceError(epoch, loss)
        trace.append(loss)
        theta = theta - config.learning_rate * grad
    if not np.all(np.isfinite(theta)):
        raise DivergenceError(config.epochs, float("nan"))
    return FittedModel(theta[:-1].copy(), float(theta[-1]), trace, config)


def _pairwise_sgd(dataset: Dataset, loss: PairLoss, config: FitConfig):
    P, N = dataset.positives, dataset.negatives
    rng = trial_rng(config.seed, 2)
    w = _init(dataset.dim, config)
    per_epoch = dataset.total_pairs
    bs = config.batch_size
    l2 = config.l2_strength
    trace = []
    for epoch in range(config.epochs):
        i = rng.integers(0, P.shape[0], per_epoch)
        j = rng.integers(0, N.shape[0], per_epoch)
        diffs = P[i] - N[j]
        lr = config.learning_rate / np.sqrt(epoch + 1.0)
        total = 0.0
        steps = 0
        # inlined pairwise_objective; this loop dominates cross-validation time
        for start in range(0, per_epoch, bs):
            D = diffs[start : start + bs]
            r = 1.0 - D @ w
            m = r.shape[0]
            if loss == "hinge":
                h = np.maximum(r, 0.0)
                value = h.sum() / m
                grad = -((h > 0) @ D) / m
            else:
                value = (r @ r) / m
                grad = -2.0 * (r @ D) / m
            value += 0.5 * l2 * (w @ w)
            if not np.isfinite(value):
                raise DivergenceError(epoch, float(value))
            w = w - lr * (grad + l2 * w)
            total += value
            steps += 1
        trace.append(float(total / steps))
    return trace, w


def fit_pairwise(dataset: Dataset, loss: PairLoss, config: FitConfig) -> FittedModel:
    """Pairwise surrogate minimization by minibatch SGD.

    Each epoch draws ``n_pos * n_neg`` pairs uniformly with replacement and
    steps once per ``batch_size`` of them, with step size
    ``learning_rate / sqrt(epoch + 1)``. The recorded loss of an epoch is the
    mean objective over its minibatches.
    """
    if loss not in ("hinge", "square"):
        raise ValueError(f"unknown pair loss {loss!r}")
    dataset.require_both_classes()
    with np.errstate(over="ignore", invalid="ignore"):
        trace, w = _pairwise_sgd(dataset, loss, config)
    if not np.all(np.isfinite(w)):
        raise DivergenceError(config.epochs, float("nan"))
    return FittedModel(w, 0.0, trace, config)


def _stratified_folds(y: NDArray[np.int64], k: int, seed: int) -> list[NDArray[np.int64]]:
    rng = trial_rng(seed, 3)
    folds: list[list[int]] = [[] for _ in range(k)]
    for label in (1, -1):
        idx = np.flatnonzero(y == label)
        idx = idx[rng.permutation(idx.size)]
        for pos, sample in enumerate(idx):
            folds[pos % k].append(int(sample))
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


def cross_validate(
    dataset: Dataset,
    fit: Callable[[Dataset, FitConfig], FittedModel],
    base: FitConfig,
    k: int = 5,
    learning_rates: tuple[float, ...] = LEARNING_RATES,
    l2_strengths: tuple[float, ...] = L2_STRENGTHS,
) -> tuple[FitConfig, float]:
    """Grid search by stratified k-fold CV on mean strict validation AUC.

    ``k`` shrinks to the size of the smaller class. With fewer than two
    samples in a class there is nothing to validate on and ``base`` is
    returned unchanged. Grid cells that diverge on any fold are skipped;
    ties go to the earlier cell.
    """
    k = min(k, dataset.n_pos, dataset.n_neg)
    if k < 2:
        return base, float("nan")
    folds = _stratified_folds(dataset.y, k, base.seed)
    best_cfg, best_score = base, -np.inf
    for lr, l2 in product(learning_rates, l2_strengths):
        cfg = replace(base, learning_rate=lr, l2_strength=l2)
        scores = []
        try:
            for f in range(k):
                val = folds[f]
                train = np.sort(np.concatenate([folds[g] for g in range(k) if g != f]))
                model = fit(dataset.subset(train), cfg)
                held = dataset.subset(val)
                s = model.decision_function(held.X)
                scores.append(auc_from_scores(s[held.y == 1], s[held.y == -1]).value)
        except DivergenceError:
            continue
        mean = float(np.mean(scores))
        if mean > best_score:
            best_cfg, best_score = cfg, mean
    return best_cfg, best_score
