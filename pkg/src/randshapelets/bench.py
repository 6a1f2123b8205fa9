"""Benchmark harness: timed multi-run training, test accuracy, CSV reports.

Runs follow the archive protocol: train on the TRAIN split only, report the
training wall clock, score accuracy on the untouched TEST split. Run r of an
experiment derives its seed from (experiment seed, r), so any single run can
be reproduced in isolation.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .dataset import Dataset, load_ucr
from .ensemble import (
    Ensemble,
    EnsembleConfig,
    train_bagging,
    train_boosting,
    train_enrs,
)
from .seeding import derive_rng, derive_seed
from .tree import (
    SearchStats,
    ShapeletTree,
    create_tree,
    exhaustive_factory,
    random_factory,
)

DATA_DIR_ENV = "RANDSHAPELETS_DATA"

ALGORITHMS = ("yk", "rs", "enrs", "enrs-bagging", "enrs-boosting")

CSV_HEADER = (
    "dataset,algorithm,run,seed,accuracy,train_seconds,"
    "candidates_visited,candidates_evaluated,candidates_pruned"
)


def default_data_dir() -> Path:
    return Path(os.environ.get(DATA_DIR_ENV, "data"))


def resolve_split(data_dir: str | Path, name: str, split: str) -> Path:
    """Locate ``<Name>_TRAIN`` / ``<Name>_TEST``, flat or in a subdirectory."""
    data_dir = Path(data_dir)
    stem = f"{name}_{split}"
    candidates = [data_dir / stem, data_dir / name / stem]
    for base in list(candidates):
        for suffix in (".txt", ".tsv", ".csv"):
            candidates.append(base.with_name(base.name + suffix))
    for path in candidates:
        if path.is_file():
            return path
    raise FileNotFoundError(
        f"no {split} file for dataset {name!r} under {data_dir} "
        f"(expected e.g. {data_dir / stem})"
    )


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str
    algorithm: str
    data_dir: str | Path = field(default_factory=default_data_dir)
    min_frac: float = 0.25
    max_frac: float = 0.67
    min_len: int | None = None
    max_len: int | None = None
    ratio: float = 0.01
    ensemble_size: int = 10
    runs: int | None = None
    seed: int = 0
    pruning: bool = True
    max_seconds: float | None = None
    # overrides the per-run seed derivation; mostly for controlled experiments
    run_seeds: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(
                f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}"
            )
        if not (0.0 < self.min_frac <= self.max_frac <= 1.0):
            raise ValueError(
                f"need 0 < min_frac <= max_frac <= 1, got {self.min_frac}, {self.max_frac}"
            )
        if not (0.0 < self.ratio <= 1.0):
            raise ValueError(f"sampling ratio must be in (0, 1], got {self.ratio}")
        if self.runs is not None and self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.ensemble_size < 1:
            raise ValueError("ensemble_size must be at least 1")
        if self.run_seeds is not None and len(self.run_seeds) < self.effective_runs:
            raise ValueError("run_seeds must cover every run")

    @property
    def effective_runs(self) -> int:
        if self.runs is not None:
            return self.runs
        return 1 if self.algorithm == "yk" else 100

    def seed_for_run(self, run: int) -> int:
        if self.run_seeds is not None:
            return int(self.run_seeds[run])
        return derive_seed(self.seed, run)

    def lengths_for(self, series_length: int) -> tuple[int, int]:
        if self.min_len is not None or self.max_len is not None:
            if self.min_len is None or self.max_len is None:
                raise ValueError("set both min_len and max_len or neither")
            lo, hi = self.min_len, self.max_len
        else:
            lo = math.ceil(self.min_frac * series_length)
            hi = math.floor(self.max_frac * series_length)
        if not (1 <= lo <= hi <= series_length):
            raise ValueError(
                f"resolved length bounds ({lo}, {hi}) invalid for series length {series_length}"
            )
        return lo, hi


@dataclass
class RunReport:
    dataset: str
    algorithm: str
    run: int
    seed: int
    accuracy: float
    train_seconds: float
    stats: SearchStats
    n_members: int
    total_nodes: int
    dnf: bool = False


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    reports: list[RunReport]

    @property
    def completed(self) -> list[RunReport]:
        return [r for r in self.reports if not r.dnf]

    @property
    def mean_accuracy(self) -> float:
        accs = [r.accuracy for r in self.completed]
        return float(np.mean(accs)) if accs else float("nan")

    @property
    def std_accuracy(self) -> float:
        accs = [r.accuracy for r in self.completed]
        return float(np.std(accs)) if accs else float("nan")

    @property
    def mean_train_seconds(self) -> float:
        times = [r.train_seconds for r in self.completed]
        return float(np.mean(times)) if times else float("nan")


def _train_once(
    cfg: ExperimentConfig, train: Dataset, run_seed: int
) -> tuple[ShapeletTree | Ensemble, float]:
    """Train one model, returning it with the training wall clock only."""
    min_len, max_len = cfg.lengths_for(train.series_length)
    start = time.perf_counter()
    model: ShapeletTree | Ensemble
    if cfg.algorithm == "yk":
        factory = exhaustive_factory(min_len, max_len)
        model = create_tree(train, min_len, max_len, factory, cfg.pruning)
    elif cfg.algorithm == "rs":
        rng = derive_rng(run_seed)
        factory = random_factory(min_len, max_len, cfg.ratio, rng)
        model = create_tree(train, min_len, max_len, factory, cfg.pruning)
    else:
        econf = EnsembleConfig(
            min_len=min_len,
            max_len=max_len,
            ratio=cfg.ratio,
            seed=run_seed,
            n_members=cfg.ensemble_size,
            pruning=cfg.pruning,
        )
        if cfg.algorithm == "enrs":
            model = train_enrs(train, econf)
        elif cfg.algorithm == "enrs-bagging":
            model = train_bagging(train, econf)
        else:
            model = train_boosting(train, econf)
    elapsed = time.perf_counter() - start
    return model, elapsed


def evaluate_accuracy(model: ShapeletTree | Ensemble, data: Dataset) -> float:
    if len(data) == 0:
        raise ValueError("cannot evaluate on an empty dataset")
    if isinstance(model, Ensemble):
        correct = sum(model.classify(ts) == ts.label for ts in data.instances)
    else:
        correct = sum(model.predict(ts) == ts.label for ts in data.instances)
    return correct / len(data)


def _model_summary(model: ShapeletTree | Ensemble) -> tuple[SearchStats, int, int]:
    if isinstance(model, Ensemble):
        return model.stats, len(model.members), model.total_nodes
    return model.stats, 1, model.n_nodes


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Execute the configured runs; training is timed, evaluation is not.

    Runs whose training exceeds ``max_seconds`` are flagged DNF, and once the
    cumulative training time passes the budget the remaining runs are not
    started (also flagged DNF).
    """
    train = load_ucr(resolve_split(cfg.data_dir, cfg.dataset, "TRAIN"))
    test = load_ucr(resolve_split(cfg.data_dir, cfg.dataset, "TEST"))
    if test.series_length != train.series_length:
        raise ValueError("train and test splits disagree on series length")
    cfg.lengths_for(train.series_length)  # validate before any training

    reports: list[RunReport] = []
    spent = 0.0
    budget = cfg.max_seconds
    for run in range(cfg.effective_runs):
        run_seed = cfg.seed_for_run(run)
        if budget is not None and spent > budget:
            reports.append(
                RunReport(
                    dataset=cfg.dataset,
                    algorithm=cfg.algorithm,
                    run=run,
                    seed=run_seed,
                    accuracy=float("nan"),
                    train_seconds=0.0,
                    stats=SearchStats(),
                    n_members=0,
                    total_nodes=0,
                    dnf=True,
                )
            )
            continue
        model, elapsed = _train_once(cfg, train, run_seed)
        spent += elapsed
        dnf = budget is not None and elapsed > budget
        stats, n_members, total_nodes = _model_summary(model)
        reports.append(
            RunReport(
                dataset=cfg.dataset,
                algorithm=cfg.algorithm,
                run=run,
                seed=run_seed,
                accuracy=float("nan") if dnf else evaluate_accuracy(model, test),
                train_seconds=elapsed,
                stats=stats,
                n_members=n_members,
                total_nodes=total_nodes,
                dnf=dnf,
            )
        )
    return ExperimentResult(config=cfg, reports=reports)


def write_csv(reports: Sequence[RunReport], path: str | Path) -> Path:
    """One row per completed run; DNF runs are omitted.

    Locale-independent decimal points, LF line endings, accuracy and seconds
    at 6 decimal places.
    """
    path = Path(path)
    lines = [CSV_HEADER]
    for r in reports:
        if r.dnf:
            continue
        lines.append(
            f"{r.dataset},{r.algorithm},{r.run},{r.seed},"
            f"{r.accuracy:.6f},{r.train_seconds:.6f},"
            f"{r.stats.candidates_visited},{r.stats.candidates_evaluated},"
            f"{r.stats.candidates_pruned}"
        )
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _stratified_folds(data: Dataset, n_folds: int) -> list[list[int]]:
    """Round-robin fold assignment within each class, deterministic."""
    folds: list[list[int]] = [[] for _ in range(n_folds)]
    by_class: dict[int, list[int]] = {}
    for i, ts in enumerate(data.instances):
        by_class.setdefault(ts.label, []).append(i)
    for label in sorted(by_class):
        for j, idx in enumerate(by_class[label]):
            folds[j % n_folds].append(idx)
    return [sorted(f) for f in folds]


@dataclass
class SweepResult:
    best: tuple[float, float]
    scores: list[tuple[tuple[float, float], float]]


def sweep_lengths(
    cfg: ExperimentConfig, grid: Sequence[tuple[float, float]]
) -> SweepResult:
    """Pick the (min_frac, max_frac) pair with the best 3-fold CV accuracy.

    Cross-validation is stratified and runs on the training split only, one
    training per fold. Folds whose training part has a single class are
    skipped; if every fold of a pair is skipped the sweep fails. Ties go to
    the pair with the smaller max_frac - min_frac span.
    """
    if not grid:
        raise ValueError("sweep grid must not be empty")
    train = load_ucr(resolve_split(cfg.data_dir, cfg.dataset, "TRAIN"))
    folds = _stratified_folds(train, 3)

    scores: list[tuple[tuple[float, float], float]] = []
    for pair_index, (lo_frac, hi_frac) in enumerate(grid):
        pair_cfg = replace(
            cfg, min_frac=lo_frac, max_frac=hi_frac, min_len=None, max_len=None
        )
        pair_cfg.lengths_for(train.series_length)  # validate
        fold_accs: list[float] = []
        for fold_index, held_out in enumerate(folds):
            train_idx = [i for i in range(len(train)) if i not in set(held_out)]
            if not held_out or not train_idx:
                continue
            fit_part = train.subset(train_idx).with_weights(
                np.full(len(train_idx), 1.0 / len(train_idx))
            )
            if len(fit_part.classes) < 2:
                continue
            val_part = train.subset(held_out)
            run_seed = derive_seed(cfg.seed, pair_index, fold_index)
            model, _ = _train_once(pair_cfg, fit_part, run_seed)
            fold_accs.append(evaluate_accuracy(model, val_part))
        if fold_accs:
            scores.append(((lo_frac, hi_frac), float(np.mean(fold_accs))))

    if not scores:
        raise ValueError("every fold of every grid pair was skipped")
    best = max(scores, key=lambda item: (item[1], -(item[0][1] - item[0][0])))
    return SweepResult(best=best[0], scores=scores)
