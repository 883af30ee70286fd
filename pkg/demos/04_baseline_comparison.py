"""Exact optimum against surrogate-loss learners on repeated splits.

On training data the exact solver can never lose, since it maximizes the
very quantity being measured. On held-out data the picture is mixed, which
is what the significance counts show.
"""

import numpy as np

from exactauc.datasets import bundled_names, load_bundled
from exactauc.experiments import METHODS, mean_rank, run_trials, significance_matrix

TRIALS = 10
matrices = {}
for name in bundled_names(2)[:3]:
    tm = run_trials(load_bundled(name), METHODS, TRIALS, seed=0, name=name, epochs=10)
    matrices[name] = tm
    train, test = np.nanmean(tm.scores("train"), 0), np.nanmean(tm.scores("test"), 0)
    print(f"{name:18s}", "  ".join(f"{m}={a:.3f}/{b:.3f}" for m, a, b in zip(METHODS, train, test)))

for split in ("train", "test"):
    print(f"\nsignificant wins on {split} (row beats column):")
    print(significance_matrix(matrices, 0.05, split).to_csv(), end="")
    means = np.array([np.nanmean(tm.scores(split), 0) for tm in matrices.values()])
    print("mean rank:", {m: round(float(r), 2) for m, r in zip(METHODS, mean_rank(means))})
