"""Ensembles of randomized shapelet trees: plain combination, bagging, boosting.

All variants train randomized-search trees; they differ only in the data fed
to each member. Plain combination and bagging weight every member vote 1;
boosting reweights training instances between rounds and votes with the
per-round alphas. Member streams derive from (ensemble seed, member index),
so members are independent and the whole ensemble is reproducible.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .dataset import Dataset, TimeSeries, bootstrap
from .seeding import derive_rng
from .tree import SearchStats, ShapeletTree, create_tree, random_factory

# Floor applied to the weighted error before computing alpha; a fully grown
# tree routinely reaches zero training error.
EPSILON_FLOOR = 1e-10


class EnsembleVariant(str, Enum):
    ENRS = "enrs"
    BAGGING = "bagging"
    BOOSTING = "boosting"


@dataclass(frozen=True)
class EnsembleConfig:
    min_len: int
    max_len: int
    ratio: float = 0.01
    seed: int = 0
    n_members: int = 10
    pruning: bool = True

    def __post_init__(self):
        if self.n_members < 1:
            raise ValueError("ensemble needs at least one member")
        if not (0.0 < self.ratio <= 1.0):
            raise ValueError(f"sampling ratio must be in (0, 1], got {self.ratio}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass
class Ensemble:
    members: list[ShapeletTree]
    alphas: list[float]
    variant: EnsembleVariant
    config: EnsembleConfig

    def __post_init__(self):
        if len(self.members) != len(self.alphas) or not self.members:
            raise ValueError("ensemble needs one alpha per member, at least one member")

    def classify(self, series: TimeSeries) -> int:
        """Alpha-weighted vote; ties go to the smallest label."""
        scores: dict[int, float] = {}
        for tree, alpha in zip(self.members, self.alphas):
            label = tree.predict(series)
            scores[label] = scores.get(label, 0.0) + alpha
        return max(sorted(scores), key=lambda c: (scores[c], -c))

    @property
    def stats(self) -> SearchStats:
        total = SearchStats()
        for tree in self.members:
            total = total + tree.stats
        return total

    @property
    def total_nodes(self) -> int:
        return sum(tree.n_nodes for tree in self.members)

    def to_dict(self) -> dict:
        return {
            "format": "shapelet-ensemble-v1",
            "variant": self.variant.value,
            "alphas": [float(a) for a in self.alphas],
            "config": {
                "min_len": self.config.min_len,
                "max_len": self.config.max_len,
                "ratio": self.config.ratio,
                "seed": self.config.seed,
                "n_members": self.config.n_members,
                "pruning": self.config.pruning,
            },
            "members": [tree.to_dict() for tree in self.members],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Ensemble":
        if data.get("format") != "shapelet-ensemble-v1":
            raise ValueError(f"unsupported ensemble format {data.get('format')!r}")
        return cls(
            members=[ShapeletTree.from_dict(t) for t in data["members"]],
            alphas=[float(a) for a in data["alphas"]],
            variant=EnsembleVariant(data["variant"]),
            config=EnsembleConfig(**data["config"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def loads(cls, text: str) -> "Ensemble":
        return cls.from_dict(json.loads(text))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps() + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Ensemble":
        return cls.loads(Path(path).read_text())


def classify(ensemble: Ensemble, series: TimeSeries) -> int:
    return ensemble.classify(series)


def _train_member(
    data: Dataset, config: EnsembleConfig, member_index: int, use_bootstrap: bool
) -> ShapeletTree:
    rng = derive_rng(config.seed, member_index)
    if use_bootstrap:
        data = bootstrap(data, rng)
    factory = random_factory(config.min_len, config.max_len, config.ratio, rng)
    return create_tree(data, config.min_len, config.max_len, factory, config.pruning)


def train_enrs(
    dataset: Dataset, config: EnsembleConfig, parallel: bool = False
) -> Ensemble:
    """N randomized trees on the original training set, unit vote weights."""
    members = _train_independent(dataset, config, use_bootstrap=False, parallel=parallel)
    return Ensemble(members, [1.0] * len(members), EnsembleVariant.ENRS, config)


def train_bagging(
    dataset: Dataset, config: EnsembleConfig, parallel: bool = False
) -> Ensemble:
    """N randomized trees, each on a bootstrap of the training set.

    Each member's stream serves its bootstrap draws first, then its candidate
    sampling.
    """
    members = _train_independent(dataset, config, use_bootstrap=True, parallel=parallel)
    return Ensemble(members, [1.0] * len(members), EnsembleVariant.BAGGING, config)


def _train_independent(
    dataset: Dataset, config: EnsembleConfig, use_bootstrap: bool, parallel: bool
) -> list[ShapeletTree]:
    if len(dataset) == 0:
        raise ValueError("cannot train on an empty dataset")
    indices = range(config.n_members)
    if parallel and config.n_members > 1:
        with ThreadPoolExecutor() as pool:
            return list(
                pool.map(
                    lambda i: _train_member(dataset, config, i, use_bootstrap), indices
                )
            )
    return [_train_member(dataset, config, i, use_bootstrap) for i in indices]


def boosting_round_update(
    weights: np.ndarray, misclassified: np.ndarray
) -> tuple[float, float, np.ndarray]:
    """One boosting reweighting step.

    Returns (epsilon, alpha, new weights): epsilon is the misclassified weight
    sum (floored at 1e-10 before use), alpha = 0.5*ln((1-eps)/eps);
    misclassified weights are divided by 2*eps, the rest left alone, then the
    whole vector is renormalized to sum 1.
    """
    weights = np.asarray(weights, dtype=np.float64)
    misclassified = np.asarray(misclassified, dtype=bool)
    eps = float(weights[misclassified].sum())
    eps_clamped = max(eps, EPSILON_FLOOR)
    alpha = 0.5 * np.log((1.0 - eps_clamped) / eps_clamped)
    updated = weights.copy()
    updated[misclassified] = updated[misclassified] / (2.0 * eps_clamped)
    updated /= updated.sum()
    return eps, float(alpha), updated


def train_boosting(
    dataset: Dataset,
    config: EnsembleConfig,
    weight_log: list[np.ndarray] | None = None,
) -> Ensemble:
    """Sequential boosting of randomized trees on instance-reweighted data.

    Weights start uniform. Each round trains a tree under the current weights
    (the split gain is weight-based throughout), measures its weighted
    training error, and stops before adding a round whose error reaches 0.5.
    If that happens on the very first round the tree is kept anyway with
    alpha 1 so the ensemble is never empty.

    ``weight_log``, when given, receives a copy of the weight vector after
    each retained round's update.
    """
    if len(dataset) == 0:
        raise ValueError("cannot train on an empty dataset")
    k = len(dataset)
    weights = np.full(k, 1.0 / k)
    members: list[ShapeletTree] = []
    alphas: list[float] = []

    for round_index in range(config.n_members):
        rng = derive_rng(config.seed, round_index)
        weighted = dataset.with_weights(weights)
        factory = random_factory(config.min_len, config.max_len, config.ratio, rng)
        tree = create_tree(
            weighted, config.min_len, config.max_len, factory, config.pruning
        )
        misclassified = np.array(
            [tree.predict(ts) != ts.label for ts in dataset.instances], dtype=bool
        )
        eps = float(weights[misclassified].sum())
        if eps >= 0.5:
            if not members:
                members.append(tree)
                alphas.append(1.0)
            break
        _, alpha, weights = boosting_round_update(weights, misclassified)
        if weight_log is not None:
            weight_log.append(weights.copy())
        members.append(tree)
        alphas.append(alpha)

    return Ensemble(members, alphas, EnsembleVariant.BOOSTING, config)
