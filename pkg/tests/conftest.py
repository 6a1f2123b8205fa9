import os
from pathlib import Path

import numpy as np
import pytest

from randshapelets import Dataset, TimeSeries
from randshapelets.bench import DATA_DIR_ENV, resolve_split

REPO_ROOT = Path(__file__).resolve().parent.parent


def ucr_data_dir() -> Path:
    return Path(os.environ.get(DATA_DIR_ENV, REPO_ROOT / "data"))


def require_ucr(name: str) -> tuple[Path, Path]:
    """Paths of the TRAIN/TEST files for a UCR dataset, or skip the test."""
    try:
        return (
            resolve_split(ucr_data_dir(), name, "TRAIN"),
            resolve_split(ucr_data_dir(), name, "TEST"),
        )
    except FileNotFoundError:
        pytest.skip(
            f"UCR dataset {name!r} not found under {ucr_data_dir()} "
            f"(set {DATA_DIR_ENV} to the archive directory to run this)"
        )


def bump_dataset(n_per_class: int = 2, m: int = 10, noise: float = 0.0, seed: int = 0) -> Dataset:
    """Two classes distinguished by an up or down bump at a fixed position."""
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n_per_class):
        up = np.zeros(m)
        up[2] = 1.0
        down = np.zeros(m)
        down[2] = -1.0
        if noise:
            up = up + rng.normal(0, noise, m)
            down = down + rng.normal(0, noise, m)
        else:
            # tiny deterministic tilt so windows away from the bump are not constant
            tilt = 1e-3 * (i + 1) * np.arange(m)
            up = up + tilt
            down = down - tilt
        rows.append(TimeSeries(1, up))
        rows.append(TimeSeries(2, down))
    return Dataset(rows)


def random_dataset(
    rng: np.random.Generator, k: int, m: int, n_classes: int = 2
) -> Dataset:
    labels = rng.integers(1, n_classes + 1, size=k)
    while len(set(labels.tolist())) < 2:
        labels = rng.integers(1, n_classes + 1, size=k)
    return Dataset([TimeSeries(int(l), rng.normal(size=m)) for l in labels])
