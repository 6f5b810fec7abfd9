"""Seed handling.

Every stochastic routine accepts ``seed`` as an int, a ``SeedSequence`` or a
``Generator``. Substreams are always derived through ``SeedSequence`` spawn
keys so that results never depend on scheduling order.
"""

from __future__ import annotations

import numpy as np


def as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def as_seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, np.random.Generator):
        # draw entropy from the generator so the caller's stream advances
        return np.random.SeedSequence(int(seed.integers(0, 2**63)))
    return np.random.SeedSequence(seed)


def substream(seed, *key: int) -> np.random.SeedSequence:
    """Child sequence identified by ``key``, independent of any spawn calls."""
    root = as_seed_sequence(seed)
    return np.random.SeedSequence(
        root.entropy, spawn_key=tuple(root.spawn_key) + tuple(int(k) for k in key)
    )


def chain_streams(seed, count: int, block: int = 0) -> list[np.random.Generator]:
    """One generator per chain; ``block`` separates independent groups of chains."""
    return [np.random.default_rng(substream(seed, block, c)) for c in range(count)]
