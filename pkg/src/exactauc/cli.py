"""Command-line interface: ``exactauc <command> [flags]``.

Commands
--------
solve           exact optimum of a dataset file, as JSON
oracle          brute-force or sampling reference optimum, as JSON
compare         repeated-split comparison against the baselines (report directory)
roc             ROC curve of a direction (default: the exact optimum), as CSV
gen-hemisphere  open-hemisphere instance and its AUC dataset
verify          does a direction satisfy at least ``t`` pairs?
bench           median wall time of the exact solver across dataset sizes

Errors print one ``error: ...`` line on stderr and exit with status 2.
Files are written to a temporary name and renamed into place on success.
The default worker-thread count comes from ``EXACTAUC_THREADS``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import datasets as bundled
from .auc_metrics import roc_points
from .core import AucValue, Dataset, OptResult, evaluate_auc_direction, linear_scores
from .data_io import format_dataset, read_dataset, trial_rng
from .experiments import METHODS, run_trials, write_report
from .hemisphere import (
    hemisphere_to_lao,
    random_hemisphere_instance,
    read_instance,
    verify_feasibility,
    write_instance,
)
from .oracles import brute_force_2d, sample_directions_oracle, vertex_oracle_3d
from .solver_nd import DEFAULT_MAX_DIM, default_threads, solve_nd

EXIT_ERROR = 2


class CliError(Exception):
    pass


def _atomic_write(path: str | Path, text: str) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp{os.getpid()}")
    try:
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, path)
    finally:
        if tmp.exists():
            tmp.unlink()


def _emit(text: str, output: str | None) -> None:
    if output:
        _atomic_write(output, text)
    else:
        sys.stdout.write(text)


def _parse_vector(text: str) -> np.ndarray:
    try:
        v = np.array([float(t) for t in text.replace(" ", "").split(",") if t], dtype=np.float64)
    except ValueError:
        raise CliError(f"cannot parse vector {text!r}; expected comma-separated numbers") from None
    if v.size == 0:
        raise CliError("empty vector")
    return v


def _load(source: str, fmt: str) -> tuple[str, Dataset]:
    """``path`` or ``bundled:<name>``."""
    if source.startswith("bundled:"):
        name = source.split(":", 1)[1]
        try:
            return name, bundled.load_bundled(name)
        except KeyError:
            raise CliError(
                f"no bundled dataset {name!r}; available: {', '.join(bundled.bundled_names())}"
            ) from None
    return Path(source).stem, read_dataset(source, fmt)


def auc_json(auc: AucValue) -> dict:
    """Exact and decimal forms of an AUC value."""
    reduced = Fraction(auc.satisfied_pairs, auc.total_pairs) if auc.total_pairs else Fraction(0)
    return {
        "fraction": str(auc),
        "reduced": f"{reduced.numerator}/{reduced.denominator}",
        "satisfied_pairs": auc.satisfied_pairs,
        "total_pairs": auc.total_pairs,
        "decimal": auc.value,
    }


def result_json(result: OptResult, dataset: Dataset, *, timing: bool = False) -> dict:
    diag = {k: v for k, v in result.diagnostics.items() if timing or k != "runtime_s"}
    return {
        "auc": auc_json(result.auc),
        "direction": [float(v) for v in result.direction],
        "dim": dataset.dim,
        "n_pos": dataset.n_pos,
        "n_neg": dataset.n_neg,
        "events_processed": int(result.events_processed),
        "degenerate_pairs": int(result.degenerate_pairs),
        "diagnostics": _jsonable(diag),
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _check_dim(dataset: Dataset, d: int | None, name: str) -> None:
    if d is not None and dataset.dim != d:
        raise CliError(f"{name}: dataset has dimension {dataset.dim}, --d says {d}")


# ---------------------------------------------------------------- commands


def cmd_solve(args) -> None:
    name, ds = _load(args.input, args.format)
    _check_dim(ds, args.d, args.input)
    result = solve_nd(ds, max_dim=args.max_dim, threads=args.threads)
    _emit(_dumps(result_json(result, ds, timing=args.timing)), args.output)


def cmd_oracle(args) -> None:
    name, ds = _load(args.input, args.format)
    _check_dim(ds, args.d, args.input)
    ds.require_both_classes()
    method = args.method
    if method == "auto":
        method = {2: "brute", 3: "vertex"}.get(ds.dim, "sample")
    if method == "brute":
        if ds.dim != 2:
            raise CliError("the brute-force oracle needs 2-dimensional data")
        result = brute_force_2d(ds)
    elif method == "vertex":
        if ds.dim != 3:
            raise CliError("the vertex oracle needs 3-dimensional data")
        result = vertex_oracle_3d(ds)
    else:
        result = sample_directions_oracle(ds, args.samples, args.seed)
    out = result_json(result, ds, timing=args.timing)
    out["oracle"] = method
    _emit(_dumps(out), args.output)


def cmd_compare(args) -> None:
    if not args.output:
        raise CliError("compare needs --output DIRECTORY")
    sources = args.input or [f"bundled:{n}" for n in bundled.bundled_names(2)]
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    loaded: dict[str, Dataset] = {}
    for source in sources:
        name, ds = _load(source, args.format)
        if name in loaded:
            raise CliError(f"duplicate dataset name {name!r}")
        _check_dim(ds, args.d, source)
        loaded[name] = ds
    matrices = [
        run_trials(
            ds,
            methods,
            args.trials,
            args.seed,
            name=name,
            train_fraction=args.train_fraction,
            stratified=args.stratified,
            epochs=args.epochs,
            threads=args.threads,
        )
        for name, ds in loaded.items()
    ]
    config = {
        "datasets": list(loaded),
        "methods": list(methods),
        "trials": args.trials,
        "seed": args.seed,
        "alpha": args.alpha,
        "train_fraction": args.train_fraction,
        "stratified": args.stratified,
        "epochs": args.epochs,
    }
    paths = write_report(
        args.output,
        matrices,
        loaded,
        args.alpha,
        config,
        train_fraction=args.train_fraction,
        stratified=args.stratified,
    )
    for p in paths:
        print(p)


def cmd_roc(args) -> None:
    name, ds = _load(args.input, args.format)
    _check_dim(ds, args.d, args.input)
    ds.require_both_classes()
    if args.w:
        w = _parse_vector(args.w)
        if w.size != ds.dim:
            raise CliError(f"--w has {w.size} components, dataset has dimension {ds.dim}")
    else:
        w = solve_nd(ds, max_dim=args.max_dim, threads=args.threads).direction
    s = linear_scores(ds.X, w)
    _emit(roc_points(s[ds.y == 1], s[ds.y == -1]).to_csv(), args.output)


def cmd_gen_hemisphere(args) -> None:
    if not args.output:
        raise CliError("gen-hemisphere needs --output PATH for the dataset")
    if args.input:
        instance = read_instance(args.input)
    else:
        if args.k is None or args.d is None:
            raise CliError("gen-hemisphere needs --input INSTANCE or both --k and --d")
        instance = random_hemisphere_instance(args.k, args.d, trial_rng(args.seed), args.t)
    anchor = _parse_vector(args.anchor) if args.anchor else None
    ds, t = hemisphere_to_lao(instance, anchor)
    out = Path(args.output)
    _atomic_write(out, format_dataset(ds, args.format))
    _atomic_write(_threshold_path(out), f"{t}\n")
    if args.instance_output:
        tmp = Path(args.instance_output)
        part = tmp.with_name(f".{tmp.name}.tmp{os.getpid()}")
        write_instance(part, instance)
        os.replace(part, tmp)
    print(_dumps({"dataset": str(out), "threshold_file": str(_threshold_path(out)), "t": t}), end="")


def _threshold_path(dataset_path: Path) -> Path:
    return dataset_path.with_suffix(".threshold")


def cmd_verify(args) -> None:
    name, ds = _load(args.input, args.format)
    if not args.w:
        raise CliError("verify needs --w")
    w = _parse_vector(args.w)
    if w.size != ds.dim:
        raise CliError(f"--w has {w.size} components, dataset has dimension {ds.dim}")
    t = args.t
    if t is None:
        tp = _threshold_path(Path(args.input))
        if not tp.exists():
            raise CliError(f"verify needs --t (no {tp} next to the dataset)")
        try:
            t = int(tp.read_text(encoding="utf-8").strip())
        except ValueError:
            raise CliError(f"{tp}: expected a single integer") from None
    ds.require_both_classes()
    feasible = verify_feasibility(ds, w, t)
    count = evaluate_auc_direction(ds, w) if np.any(w != 0) else AucValue(0, ds.total_pairs)
    _emit(
        _dumps({"feasible": feasible, "t": t, "count": count.satisfied_pairs, "auc": auc_json(count)}),
        args.output,
    )


def cmd_bench(args) -> None:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    d = args.d or 2
    rng = trial_rng(args.seed)
    lines = ["n,d,median_s,ratio"]
    prev = None
    for n in sizes:
        n_pos = n // 2
        X = rng.standard_normal((n, d))
        y = np.where(np.arange(n) < n_pos, 1, -1)
        ds = Dataset(X, y)
        times = []
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            solve_nd(ds, max_dim=args.max_dim, threads=args.threads)
            times.append(time.perf_counter() - t0)
        med = float(np.median(times))
        ratio = "" if prev is None else f"{med / prev:.3f}"
        lines.append(f"{n},{d},{med:.6f},{ratio}")
        prev = med
    _emit("\n".join(lines) + "\n", args.output)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exactauc", description="Exact linear AUC maximization.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, input_required=True):
        p.add_argument("--input", required=input_required, help="dataset path or bundled:<name>")
        p.add_argument("--output", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "sparse"), default="csv")
        p.add_argument("--d", type=int, help="expected dimension")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=default_threads())
        p.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)

    p = sub.add_parser("solve", help="exact optimum as JSON")
    common(p)
    p.add_argument("--timing", action="store_true", help="include wall time in diagnostics")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="reference optimum as JSON")
    common(p)
    p.add_argument("--method", choices=("auto", "brute", "vertex", "sample"), default="auto")
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("compare", help="repeated-split comparison report")
    p.add_argument("--input", action="append", help="dataset path or bundled:<name>; repeatable "
                   "(default: every bundled 2D dataset)")
    p.add_argument("--output", help="report directory")
    p.add_argument("--format", choices=("csv", "sparse"), default="csv")
    p.add_argument("--d", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--train-fraction", type=float, default=0.5)
    p.add_argument("--stratified", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--methods", default=",".join(METHODS))
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--threads", type=int, default=default_threads())
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("roc", help="ROC curve CSV")
    common(p)
    p.add_argument("--w", help="comma-separated direction (default: exact optimum)")
    p.set_defaults(func=cmd_roc)

    p = sub.add_parser("gen-hemisphere", help="open-hemisphere instance and its AUC dataset")
    p.add_argument("--input", help="instance CSV (vectors then a threshold row)")
    p.add_argument("--output", help="dataset path; the threshold goes to <stem>.threshold")
    p.add_argument("--instance-output", help="also write the instance CSV here")
    p.add_argument("--format", choices=("csv", "sparse"), default="csv")
    p.add_argument("--k", type=int, help="number of random unit vectors")
    p.add_argument("--d", type=int, help="dimension of random vectors")
    p.add_argument("--t", type=int, help="threshold (default: random)")
    p.add_argument("--anchor", help="comma-separated anchor point (default: origin)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen_hemisphere)

    p = sub.add_parser("verify", help="check that a direction satisfies at least t pairs")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--format", choices=("csv", "sparse"), default="csv")
    p.add_argument("--w", help="comma-separated direction")
    p.add_argument("--t", type=int, help="pair threshold (default: <stem>.threshold)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="median-of-repeats solver timings")
    p.add_argument("--sizes", default="256,512,1024")
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--output")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=default_threads())
    p.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (CliError, ValueError, OSError, KeyError) as exc:
        msg = str(exc.args[0]) if isinstance(exc, KeyError) and exc.args else str(exc)
        print(f"error: {' '.join(msg.split())}", file=sys.stderr)
        return EXIT_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
