"""Small bundled datasets for desk-scale comparisons.

They stand in for low-dimensional embeddings of imbalanced benchmark data:
a few hundred points at most, positive ratios between 0.1 and 0.5, and
class layouts that no single linear scorer ranks perfectly. The CSV files in
``exactauc/data`` were written by :func:`regenerate` and are the canonical
copies; the generators are kept so the files can be rebuilt and audited.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np

from .core import Dataset
from .data_io import read_dataset, trial_rng, write_dataset

__all__ = ["bundled_names", "load_bundled", "regenerate", "GENERATORS"]


def _labels(n_pos: int, n_neg: int) -> np.ndarray:
    return np.concatenate([np.ones(n_pos, np.int64), -np.ones(n_neg, np.int64)])


def _moons(rng: np.random.Generator) -> Dataset:
    n_pos, n_neg = 45, 105
    t1 = rng.uniform(0, np.pi, n_pos)
    t2 = rng.uniform(0, np.pi, n_neg)
    pos = np.c_[np.cos(t1), np.sin(t1)] + rng.normal(scale=0.2, size=(n_pos, 2))
    neg = np.c_[1 - np.cos(t2), 0.5 - np.sin(t2)] + rng.normal(scale=0.2, size=(n_neg, 2))
    return Dataset(np.vstack([pos, neg]), _labels(n_pos, n_neg))


def _xor(rng: np.random.Generator) -> Dataset:
    n_pos, n_neg = 60, 60
    centers = np.array([[1, 1], [-1, -1], [1, -1], [-1, 1]], dtype=float)
    pos = np.vstack([centers[k] + rng.normal(scale=0.6, size=(n_pos // 2, 2)) for k in (0, 1)])
    neg = np.vstack([centers[k] + rng.normal(scale=0.6, size=(n_neg // 2, 2)) for k in (2, 3)])
    return Dataset(np.vstack([pos, neg]), _labels(n_pos, n_neg))


def _rings(rng: np.random.Generator) -> Dataset:
    n_pos, n_neg = 30, 130
    r_pos = rng.normal(1.0, 0.3, n_pos)
    r_neg = rng.normal(2.2, 0.4, n_neg)
    a_pos = rng.uniform(0, 2 * np.pi, n_pos)
    a_neg = rng.uniform(0, 2 * np.pi, n_neg)
    pos = np.c_[r_pos * np.cos(a_pos), r_pos * np.sin(a_pos)] + [0.6, 0.0]
    neg = np.c_[r_neg * np.cos(a_neg), r_neg * np.sin(a_neg)]
    return Dataset(np.vstack([pos, neg]), _labels(n_pos, n_neg))


def _imbalanced_blobs(rng: np.random.Generator) -> Dataset:
    n_pos, n_neg = 16, 144
    pos = rng.multivariate_normal([1.2, 0.8], [[1.0, 0.6], [0.6, 0.8]], n_pos)
    neg = np.vstack([
        rng.multivariate_normal([0.0, 0.0], [[1.0, -0.3], [-0.3, 1.0]], 110),
        rng.multivariate_normal([2.5, 2.0], [[0.3, 0.0], [0.0, 0.3]], n_neg - 110),
    ])
    return Dataset(np.vstack([pos, neg]), _labels(n_pos, n_neg))


def _spiral(rng: np.random.Generator) -> Dataset:
    n_pos, n_neg = 50, 90
    t_pos = rng.uniform(0.5, 3.0, n_pos)
    t_neg = rng.uniform(0.5, 3.0, n_neg)
    pos = np.c_[t_pos * np.cos(2 * t_pos), t_pos * np.sin(2 * t_pos)]
    neg = np.c_[-t_neg * np.cos(2 * t_neg), -t_neg * np.sin(2 * t_neg)]
    pos += rng.normal(scale=0.25, size=pos.shape)
    neg += rng.normal(scale=0.25, size=neg.shape)
    return Dataset(np.vstack([pos, neg]), _labels(n_pos, n_neg))


def _banana(rng: np.random.Generator) -> Dataset:
    n_pos, n_neg = 40, 100
    x_pos = rng.uniform(-2, 2, n_pos)
    x_neg = rng.uniform(-2, 2, n_neg)
    pos = np.c_[x_pos, 0.5 * x_pos**2 - 0.5] + rng.normal(scale=0.35, size=(n_pos, 2))
    neg = np.c_[x_neg, 0.5 * x_neg**2 + 0.6] + rng.normal(scale=0.35, size=(n_neg, 2))
    return Dataset(np.vstack([pos, neg]), _labels(n_pos, n_neg))


def _blobs3d(rng: np.random.Generator) -> Dataset:
    n_pos, n_neg = 12, 36
    pos = rng.normal(loc=[0.8, 0.4, 0.0], scale=1.0, size=(n_pos, 3))
    neg = rng.normal(loc=[0.0, 0.0, 0.3], scale=1.0, size=(n_neg, 3))
    return Dataset(np.vstack([pos, neg]), _labels(n_pos, n_neg))


def _xor3d(rng: np.random.Generator) -> Dataset:
    n_pos, n_neg = 20, 24
    corners = np.array([[s1, s2, s3] for s1 in (-1, 1) for s2 in (-1, 1) for s3 in (-1, 1)], float)
    parity = corners.prod(axis=1) > 0
    pos = corners[parity][rng.integers(0, 4, n_pos)] + rng.normal(scale=0.5, size=(n_pos, 3))
    neg = corners[~parity][rng.integers(0, 4, n_neg)] + rng.normal(scale=0.5, size=(n_neg, 3))
    return Dataset(np.vstack([pos, neg]), _labels(n_pos, n_neg))


def _shell3d(rng: np.random.Generator) -> Dataset:
    n_pos, n_neg = 10, 40
    pos = rng.normal(scale=0.6, size=(n_pos, 3)) + [0.4, 0.0, 0.2]
    v = rng.normal(size=(n_neg, 3))
    neg = v / np.linalg.norm(v, axis=1, keepdims=True) * rng.normal(1.8, 0.3, (n_neg, 1))
    return Dataset(np.vstack([pos, neg]), _labels(n_pos, n_neg))


GENERATORS: dict[str, Callable[[np.random.Generator], Dataset]] = {
    "moons": _moons,
    "xor": _xor,
    "rings": _rings,
    "imbalanced_blobs": _imbalanced_blobs,
    "spiral": _spiral,
    "banana": _banana,
    "blobs3d": _blobs3d,
    "xor3d": _xor3d,
    "shell3d": _shell3d,
}


def _data_dir() -> Path:
    return Path(str(resources.files("exactauc") / "data"))


def bundled_names(dim: int | None = None) -> list[str]:
    """Names of the bundled datasets, optionally only those of dimension ``dim``."""
    names = sorted(p.stem for p in _data_dir().glob("*.csv"))
    if dim is None:
        return names
    return [n for n in names if load_bundled(n).dim == dim]


def load_bundled(name: str) -> Dataset:
    path = _data_dir() / f"{name}.csv"
    if not path.exists():
        raise KeyError(f"no bundled dataset named {name!r}")
    return read_dataset(path, "csv")


def regenerate(directory: str | Path | None = None, seed: int = 2021) -> list[Path]:
    """Rewrite every bundled CSV from its generator."""
    directory = Path(directory) if directory is not None else _data_dir()
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for k, (name, gen) in enumerate(sorted(GENERATORS.items())):
        path = directory / f"{name}.csv"
        write_dataset(gen(trial_rng(seed, k)), path, "csv")
        out.append(path)
    return out
