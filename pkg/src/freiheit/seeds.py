"""Deterministic seed derivation.

All randomness in the package flows through ``random.Random`` instances.
Parallel work units derive independent streams from one master seed by
hashing the seed together with a path of indices, so results do not depend
on scheduling order.
"""

from __future__ import annotations

import hashlib
import random

_MASK = (1 << 63) - 1


def derive_seed(master: int, *path) -> int:
    """Derive a child seed from ``master`` and a path of hashable indices."""
    text = f"{master}|{path!r}".encode()
    return int.from_bytes(hashlib.sha256(text).digest()[:8], "big") & _MASK


def rng_for(master: int, *path) -> random.Random:
    return random.Random(derive_seed(master, *path))


def as_rng(seed_or_rng) -> random.Random:
    """Accept either an integer seed or an existing generator."""
    if isinstance(seed_or_rng, random.Random):
        return seed_or_rng
    return random.Random(seed_or_rng)
