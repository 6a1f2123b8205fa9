"""UCR-format datasets with precomputed subsequence summary statistics.

Each series keeps cumulative sums of its values and squared values so the
mean and standard deviation of any window come out in O(1). These are
computed once at load time and shared by every consumer (search, ensembles,
bootstraps), which all treat series and datasets as immutable.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class UCRFormatError(ValueError):
    """Raised for malformed UCR flat files; message carries the line number."""


class TimeSeries:
    """A labelled series of real values plus cumulative sum/sum-of-squares.

    ``cum_sum[j]`` is the sum of the first j values (``cum_sum[0] == 0``);
    ``cum_sq`` is the analogue for squared values. Arrays are frozen after
    construction so instances can be shared freely.
    """

    __slots__ = ("label", "values", "cum_sum", "cum_sq")

    def __init__(self, label: int, values: Sequence[float] | np.ndarray):
        self.label = int(label)
        vals = np.ascontiguousarray(values, dtype=np.float64)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("a time series needs a non-empty 1-D value sequence")
        cs = np.empty(vals.size + 1, dtype=np.float64)
        cq = np.empty(vals.size + 1, dtype=np.float64)
        cs[0] = 0.0
        cq[0] = 0.0
        np.cumsum(vals, out=cs[1:])
        np.cumsum(vals * vals, out=cq[1:])
        for arr in (vals, cs, cq):
            arr.flags.writeable = False
        self.values = vals
        self.cum_sum = cs
        self.cum_sq = cq

    def __len__(self) -> int:
        return self.values.size

    def window_stats(self, start: int, length: int) -> tuple[float, float]:
        """Mean and population standard deviation of values[start:start+length].

        Length-1 windows have zero deviation by definition.
        """
        if length < 1 or start < 0 or start + length > len(self):
            raise ValueError(
                f"window (start={start}, length={length}) out of bounds for series of length {len(self)}"
            )
        s = self.cum_sum[start + length] - self.cum_sum[start]
        mean = s / length
        if length == 1:
            return mean, 0.0
        sq = self.cum_sq[start + length] - self.cum_sq[start]
        var = sq / length - mean * mean
        return mean, math.sqrt(var) if var > 0.0 else 0.0

    def __repr__(self) -> str:
        return f"TimeSeries(label={self.label}, m={len(self)})"


class Dataset:
    """Ordered collection of equal-length series with per-instance weights.

    Weights default to uniform 1/k. Derived views (bootstraps, node splits)
    share the underlying TimeSeries objects; only the index list and weights
    differ.
    """

    def __init__(
        self,
        instances: Sequence[TimeSeries],
        weights: Sequence[float] | np.ndarray | None = None,
    ):
        self.instances: list[TimeSeries] = list(instances)
        m = len(self.instances[0]) if self.instances else 0
        for i, ts in enumerate(self.instances):
            if len(ts) != m:
                raise ValueError(
                    f"inconsistent series length at instance {i}: {len(ts)} != {m}"
                )
        self.series_length = m
        if weights is None:
            k = len(self.instances)
            w = np.full(k, 1.0 / k) if k else np.empty(0)
        else:
            w = np.asarray(weights, dtype=np.float64).copy()
            if w.shape != (len(self.instances),):
                raise ValueError("weights must have one entry per instance")
            if not np.all(np.isfinite(w)) or np.any(w < 0.0):
                raise ValueError("weights must be finite and non-negative")
            if len(self.instances) and w.sum() <= 0.0:
                raise ValueError("weights must carry positive total mass")
        w.flags.writeable = False
        self.weights = w
        self.classes: list[int] = sorted({ts.label for ts in self.instances})
        self._matrix: np.ndarray | None = None
        self._cum_sums: np.ndarray | None = None
        self._cum_sqs: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.instances)

    @property
    def labels(self) -> np.ndarray:
        return np.array([ts.label for ts in self.instances], dtype=np.int64)

    def matrix(self) -> np.ndarray:
        """(k, m) float64 view of all series, built lazily for the kernels."""
        if self._matrix is None:
            self._matrix = np.ascontiguousarray(
                np.stack([ts.values for ts in self.instances])
            )
        return self._matrix

    def cum_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        if self._cum_sums is None:
            self._cum_sums = np.ascontiguousarray(
                np.stack([ts.cum_sum for ts in self.instances])
            )
            self._cum_sqs = np.ascontiguousarray(
                np.stack([ts.cum_sq for ts in self.instances])
            )
        return self._cum_sums, self._cum_sqs

    def with_weights(self, weights: Sequence[float] | np.ndarray) -> "Dataset":
        """Same instances, new weights (series storage shared)."""
        return Dataset(self.instances, weights)

    def subset(self, indices: Iterable[int]) -> "Dataset":
        """Instance view selected by index; weights carried over unchanged."""
        idx = list(indices)
        return Dataset(
            [self.instances[i] for i in idx],
            np.asarray([self.weights[i] for i in idx]),
        )

    def majority_label(self) -> int:
        """Weighted-majority class; ties go to the smallest label."""
        if not self.instances:
            raise ValueError("empty dataset has no majority label")
        totals: dict[int, float] = {}
        for ts, w in zip(self.instances, self.weights):
            totals[ts.label] = totals.get(ts.label, 0.0) + float(w)
        return max(sorted(totals), key=lambda c: (totals[c], -c))

    def __repr__(self) -> str:
        return (
            f"Dataset(k={len(self)}, m={self.series_length}, classes={self.classes})"
        )


def _parse_label(token: str, line_no: int) -> int:
    try:
        raw = float(token)
    except ValueError:
        raise UCRFormatError(f"non-numeric label {token!r} at line {line_no}") from None
    if not raw.is_integer():
        raise UCRFormatError(f"non-integral label {token!r} at line {line_no}")
    return int(raw)


def _tokenize(line: str) -> list[str]:
    # UCR releases mix comma-, space- and tab-delimited files.
    return line.replace(",", " ").split()


def load_ucr(path: str | Path) -> Dataset:
    """Parse a UCR flat file: one instance per line, label then m values.

    Accepts comma, space or tab delimiters and skips blank lines. Labels must
    be integral-valued numbers (UCR stores them as e.g. ``1.0000000e+00``).
    All rows must have the same length. Errors report the offending line.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise UCRFormatError(f"cannot read {path}: {exc}") from exc

    instances: list[TimeSeries] = []
    expected_len: int | None = None
    for line_no, line in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(line)
        if not tokens:
            continue
        if len(tokens) < 2:
            raise UCRFormatError(f"row with no values at line {line_no}")
        label = _parse_label(tokens[0], line_no)
        try:
            values = np.array([float(t) for t in tokens[1:]], dtype=np.float64)
        except ValueError:
            raise UCRFormatError(f"non-numeric token at line {line_no}") from None
        if expected_len is None:
            expected_len = values.size
        elif values.size != expected_len:
            raise UCRFormatError(f"inconsistent row length at line {line_no}")
        instances.append(TimeSeries(label, values))

    if not instances:
        raise UCRFormatError(f"empty dataset file: {path}")
    return Dataset(instances)


def save_ucr(dataset: Dataset, path: str | Path) -> None:
    """Write a dataset back out in comma-delimited UCR format."""
    lines = []
    for ts in dataset.instances:
        lines.append(",".join([str(ts.label)] + [repr(float(v)) for v in ts.values]))
    Path(path).write_text("\n".join(lines) + "\n")


def bootstrap(dataset: Dataset, rng: np.random.Generator) -> Dataset:
    """Sample ``len(dataset)`` instances with replacement, one draw per slot.

    The result shares TimeSeries storage with the source and gets uniform
    weights. Identical generator state yields an identical sample.
    """
    k = len(dataset)
    if k == 0:
        raise ValueError("cannot bootstrap an empty dataset")
    idx = rng.integers(0, k, size=k)
    return Dataset([dataset.instances[i] for i in idx])


def candidate_count(dataset: Dataset, min_len: int, max_len: int) -> int:
    """Number of subsequences of lengths in [min_len, max_len] over all instances."""
    m = dataset.series_length
    if not (1 <= min_len <= max_len <= m):
        raise ValueError(
            f"length bounds (min={min_len}, max={max_len}) invalid for series length {m}"
        )
    k = len(dataset)
    return sum(k * (m - length + 1) for length in range(min_len, max_len + 1))
