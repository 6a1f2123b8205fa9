"""Order lines: weighted entropy, best splits, and the optimistic gain bound.

An order line collects one (distance, class, weight) entry per training
instance for a single candidate. Split quality is information gain in bits,
computed from instance weights so boosting reweighting flows through
unchanged; with uniform weights it coincides with count-based gain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ._kernels import _best_split_sorted, _gain_bound_sorted
from .dataset import Dataset


@dataclass(frozen=True)
class SplitResult:
    """Best split of an order line: gain in bits, threshold, and the gap
    between the two distances the threshold sits between."""

    gain: float
    split_distance: float
    margin: float


class OrderLine:
    """Entries kept in insertion (instance) order; sorted views built on demand."""

    def __init__(self):
        self._dists: list[float] = []
        self._labels: list[int] = []
        self._weights: list[float] = []

    def add(self, distance: float, label: int, weight: float) -> None:
        if not (weight > 0.0):
            raise ValueError(f"order line weights must be positive, got {weight}")
        self._dists.append(float(distance))
        self._labels.append(int(label))
        self._weights.append(float(weight))

    def __len__(self) -> int:
        return len(self._dists)

    @property
    def total_weight(self) -> float:
        return float(sum(self._weights))

    def entries(self) -> list[tuple[float, int, float]]:
        """(distance, label, weight) triples in insertion order."""
        return list(zip(self._dists, self._labels, self._weights))

    def distances(self) -> np.ndarray:
        """Distances in insertion order."""
        return np.asarray(self._dists, dtype=np.float64)

    def class_totals(self) -> dict[int, float]:
        totals: dict[int, float] = {}
        for label, w in zip(self._labels, self._weights):
            totals[label] = totals.get(label, 0.0) + w
        return totals

    def _sorted_arrays(
        self, class_index: Mapping[int, int]
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        d = np.asarray(self._dists, dtype=np.float64)
        order = np.argsort(d, kind="stable")
        c = np.asarray([class_index[l] for l in self._labels], dtype=np.int64)[order]
        w = np.asarray(self._weights, dtype=np.float64)[order]
        return d[order], c, w


def entropy(class_weights: Mapping[object, float] | Sequence[float]) -> float:
    """Weighted entropy in bits, with 0*log(0) taken as 0."""
    if isinstance(class_weights, Mapping):
        weights = list(class_weights.values())
    else:
        weights = list(class_weights)
    total = 0.0
    for w in weights:
        if w < 0.0:
            raise ValueError(f"class weights must be non-negative, got {w}")
        total += w
    if total <= 0.0:
        raise ValueError("total class weight must be positive")
    h = 0.0
    for w in weights:
        if w > 0.0:
            p = w / total
            h -= p * math.log2(p)
    return h


def best_split(line: OrderLine) -> SplitResult:
    """Max-gain threshold over midpoints between consecutive distinct distances.

    Ties on gain prefer the larger margin, then the smaller threshold. A line
    with fewer than two entries or a single class present yields gain 0 with a
    degenerate but deterministic threshold.
    """
    if len(line) == 0:
        raise ValueError("cannot split an empty order line")
    labels = sorted(set(line._labels))
    index = {l: i for i, l in enumerate(labels)}
    d, c, w = line._sorted_arrays(index)
    gain, split, margin = _best_split_sorted(d, c, w, len(line), len(labels))
    return SplitResult(gain=float(gain), split_distance=float(split), margin=float(margin))


def optimistic_gain_bound(
    partial: OrderLine, remaining: Mapping[int, float]
) -> float:
    """Upper bound on any gain reachable by placing ``remaining`` onto the line.

    Remaining classes are appended en bloc beyond either extreme of the line;
    all 2^C end assignments are evaluated for up to 12 such classes (greedy
    beyond that) and the best resulting split gain is returned. With an empty
    line this is log2 of the number of remaining classes.
    """
    remaining = {k: v for k, v in remaining.items() if v > 0.0}
    if len(partial) == 0 and not remaining:
        raise ValueError("need a non-empty line or non-empty remaining weights")
    labels = sorted(set(partial._labels) | set(remaining))
    index = {l: i for i, l in enumerate(labels)}
    if len(partial) == 0:
        n_active = len(remaining)
        return math.log2(n_active) if n_active > 1 else 0.0
    d, c, w = partial._sorted_arrays(index)
    rem = np.zeros(len(labels))
    for label, weight in remaining.items():
        rem[index[label]] = weight
    n = len(partial)
    n_classes = len(labels)
    bound = _gain_bound_sorted(
        d,
        c,
        w,
        n,
        rem,
        n_classes,
        np.empty(n + n_classes),
        np.empty(n + n_classes, dtype=np.int64),
        np.empty(n + n_classes),
        np.empty(n_classes),
        np.empty(n_classes),
    )
    return float(bound)


def split_dataset(
    dataset: Dataset, line: OrderLine, split_distance: float
) -> tuple[Dataset, Dataset]:
    """Partition instances by their line distance: left iff distance <= threshold.

    The line must hold one entry per instance, in instance order. Weights are
    carried over unchanged (not renormalized).
    """
    if len(line) != len(dataset):
        raise ValueError(
            f"order line has {len(line)} entries for {len(dataset)} instances"
        )
    left_idx = [i for i, d in enumerate(line._dists) if d <= split_distance]
    right_idx = [i for i, d in enumerate(line._dists) if d > split_distance]
    return dataset.subset(left_idx), dataset.subset(right_idx)
