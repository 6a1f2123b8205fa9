"""Command-line harness: train, evaluate, bench, sweep.

Data files are resolved from --data-dir, falling back to the
RANDSHAPELETS_DATA environment variable and then ./data. Exit code 0 on
success, 1 with a diagnostic on stderr otherwise.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import (
    ExperimentConfig,
    default_data_dir,
    evaluate_accuracy,
    load_ucr,
    resolve_split,
    run_experiment,
    sweep_lengths,
    write_csv,
    _train_once,
)
from .ensemble import Ensemble
from .seeding import derive_seed
from .tree import ShapeletTree


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dataset", required=True, help="UCR dataset name")
    parser.add_argument(
        "--data-dir",
        default=None,
        help=f"directory with <Name>_TRAIN/<Name>_TEST files "
        f"(default: $RANDSHAPELETS_DATA or ./data)",
    )
    parser.add_argument(
        "--algorithm",
        default="rs",
        choices=["yk", "rs", "enrs", "enrs-bagging", "enrs-boosting"],
    )
    parser.add_argument("--min-frac", type=float, default=0.25)
    parser.add_argument("--max-frac", type=float, default=0.67)
    parser.add_argument("--min-len", type=int, default=None)
    parser.add_argument("--max-len", type=int, default=None)
    parser.add_argument("--ratio", type=float, default=0.01)
    parser.add_argument("--ensemble-size", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--no-pruning", action="store_true", help="disable gain-bound candidate pruning"
    )
    parser.add_argument("--max-seconds", type=float, default=None)


def _config_from_args(args: argparse.Namespace, runs: int | None = None) -> ExperimentConfig:
    return ExperimentConfig(
        dataset=args.dataset,
        algorithm=args.algorithm,
        data_dir=Path(args.data_dir) if args.data_dir else default_data_dir(),
        min_frac=args.min_frac,
        max_frac=args.max_frac,
        min_len=args.min_len,
        max_len=args.max_len,
        ratio=args.ratio,
        ensemble_size=args.ensemble_size,
        runs=runs,
        seed=args.seed,
        pruning=not args.no_pruning,
        max_seconds=args.max_seconds,
    )


def _cmd_train(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    train = load_ucr(resolve_split(cfg.data_dir, cfg.dataset, "TRAIN"))
    run_seed = derive_seed(cfg.seed, 0)
    model, elapsed = _train_once(cfg, train, run_seed)
    model.save(args.output)
    print(f"trained {cfg.algorithm} on {cfg.dataset} in {elapsed:.3f}s -> {args.output}")
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    text = Path(args.model).read_text()
    header = json.loads(text)
    if header.get("format") == "shapelet-ensemble-v1":
        model: Ensemble | ShapeletTree = Ensemble.loads(text)
    else:
        model = ShapeletTree.loads(text)
    data_dir = Path(args.data_dir) if args.data_dir else default_data_dir()
    data = load_ucr(resolve_split(data_dir, args.dataset, args.split.upper()))
    acc = evaluate_accuracy(model, data)
    print(f"{args.dataset} {args.split} accuracy: {acc:.6f} ({len(data)} instances)")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, runs=args.runs)
    result = run_experiment(cfg)
    dnf = [r for r in result.reports if r.dnf]
    for r in result.reports:
        if r.dnf:
            print(f"run {r.run}: DNF (budget {cfg.max_seconds}s)")
        else:
            print(
                f"run {r.run}: accuracy={r.accuracy:.6f} "
                f"train={r.train_seconds:.3f}s visited={r.stats.candidates_visited} "
                f"evaluated={r.stats.candidates_evaluated} pruned={r.stats.candidates_pruned}"
            )
    if result.completed:
        print(
            f"{cfg.dataset} {cfg.algorithm}: mean accuracy "
            f"{result.mean_accuracy:.6f} +/- {result.std_accuracy:.6f} over "
            f"{len(result.completed)} runs, mean train {result.mean_train_seconds:.3f}s"
        )
    if dnf:
        print(f"{len(dnf)} run(s) DNF")
    if args.csv:
        write_csv(result.reports, args.csv)
        print(f"wrote {args.csv}")
    return 0 if result.completed else 1


def _parse_grid(text: str) -> list[tuple[float, float]]:
    pairs = []
    for chunk in text.split(","):
        lo, _, hi = chunk.partition(":")
        pairs.append((float(lo), float(hi)))
    return pairs


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, runs=1)
    grid = _parse_grid(args.grid)
    result = sweep_lengths(cfg, grid)
    for (lo, hi), score in result.scores:
        print(f"min_frac={lo} max_frac={hi}: cv accuracy {score:.6f}")
    lo, hi = result.best
    print(f"best: min_frac={lo} max_frac={hi} (tuned, artifact protocol)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randshapelets",
        description="Shapelet tree and ensemble benchmark harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train one model and save it")
    _add_config_flags(p_train)
    p_train.add_argument("--output", required=True, help="model file to write")
    p_train.set_defaults(func=_cmd_train)

    p_eval = sub.add_parser("evaluate", help="score a saved model on a split")
    p_eval.add_argument("--model", required=True)
    p_eval.add_argument("--dataset", required=True)
    p_eval.add_argument("--data-dir", default=None)
    p_eval.add_argument("--split", default="test", choices=["train", "test"])
    p_eval.set_defaults(func=_cmd_evaluate)

    p_bench = sub.add_parser("bench", help="timed multi-run experiment")
    _add_config_flags(p_bench)
    p_bench.add_argument("--runs", type=int, default=None)
    p_bench.add_argument("--csv", default=None, help="write per-run CSV here")
    p_bench.set_defaults(func=_cmd_bench)

    p_sweep = sub.add_parser("sweep", help="grid-search length fractions by CV")
    _add_config_flags(p_sweep)
    p_sweep.add_argument(
        "--grid",
        required=True,
        help="comma-separated min:max fraction pairs, e.g. 0.1:0.4,0.25:0.67",
    )
    p_sweep.set_defaults(func=_cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
