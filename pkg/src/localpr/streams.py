"""Deterministic random-stream derivation.

Every random draw in the package comes from a generator obtained with
:func:`stream`. A stream is identified by the master seed plus an integer key
path, e.g. ``stream(seed, round, trial)``; the key is the numpy
``SeedSequence.spawn_key``. Streams depend only on their key, never on the
order in which work is scheduled, so parallel and serial runs agree bit for bit.
"""

from __future__ import annotations

import numpy as np

__all__ = ["stream", "master_seed_of"]


def stream(master_seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def master_seed_of(seed_or_rng) -> int:
    """Accept an int seed or a Generator (from which one 63-bit seed is drawn)."""
    if isinstance(seed_or_rng, np.random.Generator):
        return int(seed_or_rng.integers(2**63))
    if seed_or_rng is None:
        return 0
    return int(seed_or_rng)
