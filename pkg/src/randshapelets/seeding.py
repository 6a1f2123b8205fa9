"""Deterministic random-stream derivation.

Every consumer of randomness (a benchmark run, an ensemble member, a
bootstrap) gets its own generator derived from the experiment seed plus its
index. Derivation goes through ``numpy.random.SeedSequence``, whose mixing is
specified and stable across platforms, so identical (seed, index) always
yields an identical stream.
"""

from __future__ import annotations

import numpy as np


def _check_components(components: tuple[int, ...]) -> list[int]:
    if not components:
        raise ValueError("at least one seed component is required")
    out = []
    for c in components:
        c = int(c)
        if c < 0:
            raise ValueError(f"seed components must be non-negative, got {c}")
        out.append(c)
    return out


def derive_rng(*components: int) -> np.random.Generator:
    """Generator seeded by the ordered tuple of non-negative integers."""
    return np.random.default_rng(np.random.SeedSequence(_check_components(components)))


def derive_seed(*components: int) -> int:
    """Collapse components to a single non-negative integer seed."""
    seq = np.random.SeedSequence(_check_components(components))
    return int(seq.generate_state(1, dtype=np.uint64)[0])
