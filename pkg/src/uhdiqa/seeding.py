"""Deterministic seed derivation.

All randomness in the toolkit flows through named sub-streams derived from
integer seed tuples, so results never depend on call order or thread count.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def seed_sequence(*parts: int) -> np.random.SeedSequence:
    """Build a SeedSequence from an integer tuple such as (seed, i, j)."""
    return np.random.SeedSequence([int(p) & _MASK64 for p in parts])


def rng_for(*parts: int) -> np.random.Generator:
    """Independent generator for the stream named by the given tuple."""
    return np.random.default_rng(seed_sequence(*parts))


def derive_seed(*parts: int) -> int:
    """Collapse a seed tuple into a single 64-bit child seed."""
    return int(seed_sequence(*parts).generate_state(1, np.uint64)[0])
