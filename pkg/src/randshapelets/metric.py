"""Z-normalized subsequence distances with early abandoning.

Distances are squared Euclidean (no square root, no length normalization).
Subsequences are z-normalized with the population standard deviation taken
from the series' cumulative statistics; windows with near-zero deviation
normalize to all zeros so distances stay finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._kernels import SIGMA_FLOOR, _min_sq_dist
from .dataset import TimeSeries


class _Abandoned:
    """Sentinel returned by :func:`sq_dist` when the threshold was exceeded."""

    __slots__ = ()

    def __repr__(self) -> str:  # pragma: no cover
        return "ABANDONED"


ABANDONED = _Abandoned()


@dataclass(frozen=True)
class Shapelet:
    """A z-normalized candidate subsequence plus its provenance.

    ``source`` is (instance index, start position, length) in the dataset the
    shapelet was extracted from; positions are 0-based.
    """

    norm_values: np.ndarray = field(repr=False)
    source: tuple[int, int, int]

    def __post_init__(self):
        vals = np.ascontiguousarray(self.norm_values, dtype=np.float64)
        vals.flags.writeable = False
        object.__setattr__(self, "norm_values", vals)

    def __len__(self) -> int:
        return self.norm_values.size

    @classmethod
    def from_series(
        cls, series: TimeSeries, start: int, length: int, instance_index: int = -1
    ) -> "Shapelet":
        return cls(
            norm_values=znormalize_window(series, start, length),
            source=(instance_index, start, length),
        )


def znormalize_window(series: TimeSeries, start: int, length: int) -> np.ndarray:
    """Z-normalize values[start:start+length] using the O(1) summary statistics.

    Population standard deviation; a window with sigma below 1e-10 comes back
    as all zeros.
    """
    mean, sigma = series.window_stats(start, length)
    window = series.values[start : start + length]
    if sigma < SIGMA_FLOOR:
        return np.zeros(length)
    inv = 1.0 / sigma
    return (window - mean) * inv


def sq_dist(
    a: Sequence[float] | np.ndarray,
    b: Sequence[float] | np.ndarray,
    abandon_at: float | None = None,
) -> float | _Abandoned:
    """Sum of squared differences, accumulated left to right.

    With ``abandon_at`` set, returns :data:`ABANDONED` as soon as the partial
    sum exceeds it (strictly).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    total = 0.0
    if abandon_at is None:
        for x, y in zip(a, b):
            d = x - y
            total += d * d
        return total
    for x, y in zip(a, b):
        d = x - y
        total += d * d
        if total > abandon_at:
            return ABANDONED
    return total


def subsequence_distance(shapelet: Shapelet, series: TimeSeries) -> float:
    """Minimum sq_dist between the shapelet and every z-normalized window.

    Each window is early-abandoned at the running minimum, which leaves the
    result identical to the no-abandon computation.
    """
    length = len(shapelet)
    if length > len(series):
        raise ValueError(
            f"shapelet of length {length} longer than series of length {len(series)}"
        )
    cand = shapelet.norm_values
    cand_sq_sum = 0.0
    for v in cand:
        cand_sq_sum += v * v
    dist, _ = _min_sq_dist(
        series.values, series.cum_sum, series.cum_sq, cand, cand_sq_sum
    )
    return float(dist)
