"""Seed plumbing: accept ints or SeedSequence children interchangeably."""
from __future__ import annotations

import numpy as np


def as_seed_sequence(seed) -> np.random.SeedSequence:
    """Wrap an integer seed; pass an existing SeedSequence through."""
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)
