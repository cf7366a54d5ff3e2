"""Splittable seeding: every trial and sub-estimator gets its own generator."""

from typing import List, Optional, Union

import numpy as np

SeedLike = Union[None, int, np.random.SeedSequence, np.random.Generator]


def make_rng(seed: SeedLike = None) -> np.random.Generator:
    """Return a generator for an int, SeedSequence or existing generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def trial_generators(master_seed: Optional[int], count: int) -> List[np.random.Generator]:
    """Independent generators for count trials, derived from the master seed."""
    children = np.random.SeedSequence(master_seed).spawn(count)
    return [np.random.default_rng(child) for child in children]


def budget_seed(master_seed: int, budget_index: int) -> np.random.SeedSequence:
    """Seed sequence of one rung of a budget ladder."""
    return np.random.SeedSequence(entropy=master_seed, spawn_key=(budget_index,))
