"""Dataset files, standardization and seeded train/test splits.

Two on-disk formats are supported.

``csv``
    UTF-8, comma separated, ``.`` as decimal point. An optional header row
    is recognised when any of its fields is not a number. The label column
    is the one named ``label``, ``y``, ``class`` or ``target`` (case
    insensitive), otherwise the last column. Labels are ``1``/``-1``, or
    ``0``/``1`` with ``0`` read as ``-1``; ``+1`` and the Unicode minus sign
    are accepted.

``sparse``
    One sample per line: ``<label> <idx>:<val> <idx>:<val> ...`` with
    1-based feature indices. Missing features are zero and the dimension is
    the largest index seen. Blank lines and lines starting with ``#`` are
    skipped.

Writers emit ``repr(float)`` for every coordinate, the shortest decimal that
reads back to the same double, so a write/read round trip is bit-exact.

Random splits use numpy's PCG64 bit generator, seeded through
``numpy.random.SeedSequence``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from .core import Dataset

__all__ = [
    "DatasetFormatError",
    "StandardizationStats",
    "read_dataset",
    "write_dataset",
    "parse_label",
    "standardize",
    "split_shuffle",
    "trial_rng",
]

LABEL_COLUMNS = ("label", "y", "class", "target")


class DatasetFormatError(ValueError):
    """A dataset file could not be parsed; the message names file and line."""


def _clean(token: str) -> str:
    return token.strip().replace("−", "-")


def parse_label(token: str, *, where: str = "") -> int:
    """Map a label token to +1/-1. Raises ``DatasetFormatError`` on anything else."""
    t = _clean(token)
    try:
        v = float(t)
    except ValueError:
        raise DatasetFormatError(f"{where}unknown label {token.strip()!r}") from None
    if v == 1.0:
        return 1
    if v in (-1.0, 0.0):
        return -1
    raise DatasetFormatError(f"{where}unknown label {token.strip()!r}")


def _is_number(token: str) -> bool:
    try:
        float(_clean(token))
    except ValueError:
        return False
    return True


def _read_csv(text: str, name: str) -> Dataset:
    rows = list(csv.reader(io.StringIO(text)))
    numbered = [(k + 1, r) for k, r in enumerate(rows) if r and any(f.strip() for f in r)]
    if not numbered:
        raise DatasetFormatError(f"{name}: no data")
    label_col = -1
    first_line, first = numbered[0]
    if not all(_is_number(f) for f in first):
        header = [f.strip().lower() for f in first]
        for cand in LABEL_COLUMNS:
            if cand in header:
                label_col = header.index(cand)
                break
        ncols = len(first)
        numbered = numbered[1:]
    else:
        ncols = len(first)
    if not numbered:
        raise DatasetFormatError(f"{name}: header but no data rows")
    if ncols < 2:
        raise DatasetFormatError(f"{name}:{first_line}: need at least one feature and a label")
    label_col = label_col % ncols
    X = np.empty((len(numbered), ncols - 1))
    y = np.empty(len(numbered), dtype=np.int64)
    for k, (lineno, row) in enumerate(numbered):
        where = f"{name}:{lineno}: "
        if len(row) != ncols:
            raise DatasetFormatError(f"{where}expected {ncols} columns, found {len(row)}")
        y[k] = parse_label(row[label_col], where=where)
        feats = row[:label_col] + row[label_col + 1 :]
        try:
            X[k] = [float(_clean(f)) for f in feats]
        except ValueError:
            raise DatasetFormatError(f"{where}non-numeric feature in {row!r}") from None
        if not np.all(np.isfinite(X[k])):
            raise DatasetFormatError(f"{where}non-finite feature")
    return Dataset(X, y)


def _read_sparse(text: str, name: str) -> Dataset:
    labels: list[int] = []
    entries: list[dict[int, float]] = []
    dim = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        where = f"{name}:{lineno}: "
        tokens = line.split()
        labels.append(parse_label(tokens[0], where=where))
        row: dict[int, float] = {}
        for tok in tokens[1:]:
            idx, sep, val = tok.partition(":")
            if not sep:
                raise DatasetFormatError(f"{where}malformed feature {tok!r}")
            try:
                j = int(idx)
                v = float(_clean(val))
            except ValueError:
                raise DatasetFormatError(f"{where}malformed feature {tok!r}") from None
            if j < 1:
                raise DatasetFormatError(f"{where}feature index must be >= 1, got {j}")
            if not math.isfinite(v):
                raise DatasetFormatError(f"{where}non-finite feature {tok!r}")
            row[j] = v
            dim = max(dim, j)
        entries.append(row)
    if not labels:
        raise DatasetFormatError(f"{name}: no data")
    if dim == 0:
        raise DatasetFormatError(f"{name}: no features")
    X = np.zeros((len(labels), dim))
    for k, row in enumerate(entries):
        for j, v in row.items():
            X[k, j - 1] = v
    return Dataset(X, np.array(labels))


def read_dataset(path: str | Path, format: str = "csv") -> Dataset:
    """Load a dataset file in ``csv`` or ``sparse`` format."""
    path = Path(path)
    if format not in ("csv", "sparse"):
        raise ValueError(f"unknown format {format!r}")
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DatasetFormatError(f"{path}: no such file") from None
    if format == "csv":
        return _read_csv(text, str(path))
    return _read_sparse(text, str(path))


def format_dataset(dataset: Dataset, format: str = "csv") -> str:
    lines = []
    if format == "csv":
        lines.append(",".join([f"x{k + 1}" for k in range(dataset.dim)] + ["label"]))
        for row, label in zip(dataset.X, dataset.y):
            lines.append(",".join([repr(float(v)) for v in row] + [str(int(label))]))
    elif format == "sparse":
        for row, label in zip(dataset.X, dataset.y):
            last = dataset.dim - 1
            # keep -0.0 and always the last index so the dimension survives
            feats = [
                f"{j + 1}:{float(v)!r}"
                for j, v in enumerate(row)
                if v != 0.0 or math.copysign(1.0, v) < 0 or j == last
            ]
            lines.append(" ".join([f"{int(label):+d}"] + feats))
    else:
        raise ValueError(f"unknown format {format!r}")
    return "\n".join(lines) + "\n"


def write_dataset(dataset: Dataset, path: str | Path, format: str = "csv") -> None:
    """Write ``dataset``; see the module docstring for the formats.

    The sparse writer omits zero features except the last column, which it
    always writes so the dimension reads back unchanged.
    """
    Path(path).write_text(format_dataset(dataset, format), encoding="utf-8")


@dataclass(frozen=True, eq=False)
class StandardizationStats:
    means: NDArray[np.float64]
    stdevs: NDArray[np.float64]

    def apply(self, dataset: Dataset) -> Dataset:
        if dataset.dim != self.means.shape[0]:
            raise ValueError(
                f"dataset has dimension {dataset.dim}, statistics have {self.means.shape[0]}"
            )
        scale = np.where(self.stdevs > 0, self.stdevs, 1.0)
        Z = (dataset.X - self.means) / scale
        Z[:, self.stdevs == 0] = 0.0
        return Dataset(Z, dataset.y)


def standardize(train: Dataset, test: Dataset) -> tuple[Dataset, Dataset, StandardizationStats]:
    """Center and scale both sets by the training mean and (population) std.

    Columns that are constant on the training set map to zero everywhere.
    """
    if train.dim != test.dim:
        raise ValueError(f"train has dimension {train.dim}, test has {test.dim}")
    stats = StandardizationStats(train.X.mean(axis=0), train.X.std(axis=0))
    return stats.apply(train), stats.apply(test), stats


def trial_rng(seed: int, *keys: int) -> np.random.Generator:
    """PCG64 generator for ``seed`` and any number of sub-stream keys."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *keys])))


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def split_shuffle(
    dataset: Dataset,
    train_fraction: float,
    seed: int,
    stratified: bool = False,
) -> tuple[Dataset, Dataset]:
    """Shuffle and split into train and test.

    Non-stratified: the first ``round(train_fraction * n)`` shuffled samples
    train. Stratified: each class contributes ``round(train_fraction * n_c)``
    samples, and both splits must keep at least one of each class.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must lie in (0, 1)")
    rng = trial_rng(seed)
    if not stratified:
        perm = rng.permutation(dataset.n)
        k = _round_half_up(train_fraction * dataset.n)
        if k == 0 or k == dataset.n:
            raise ValueError(f"split of {dataset.n} samples leaves an empty side")
        return dataset.subset(np.sort(perm[:k])), dataset.subset(np.sort(perm[k:]))
    train_idx, test_idx = [], []
    for label in (1, -1):
        idx = np.flatnonzero(dataset.y == label)
        idx = idx[rng.permutation(idx.size)]
        k = _round_half_up(train_fraction * idx.size)
        if k == 0 or k == idx.size:
            name = "positive" if label == 1 else "negative"
            raise ValueError(
                f"stratified split of {idx.size} {name} samples leaves one side without that class"
            )
        train_idx.append(idx[:k])
        test_idx.append(idx[k:])
    return (
        dataset.subset(np.sort(np.concatenate(train_idx))),
        dataset.subset(np.sort(np.concatenate(test_idx))),
    )
