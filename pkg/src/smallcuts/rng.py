"""Seeded randomness helpers.

Every source of randomness in the library flows through this module so that
callers (and tests) can account for random bits.  Deterministic code paths
must never touch these functions; the ``draws`` counter makes that checkable.
"""

from __future__ import annotations

import hashlib
import random

# Total number of randomness draws since the last reset.  Incremented by
# every helper below; deterministic algorithms are expected to leave it
# untouched.
draws = 0


def reset_draw_counter() -> None:
    global draws
    draws = 0


def make_rng(seed: object) -> random.Random:
    """Seeded PRNG instance for bulk sampling (generators, shuffles).

    Non-int seeds (tuples of run parameters) are hashed to a stable int.
    """
    global draws
    draws += 1
    if not isinstance(seed, int):
        seed = int.from_bytes(_digest(seed), "big")
    return random.Random(seed)


def _digest(*keys: object) -> bytes:
    text = ":".join(repr(k) for k in keys).encode()
    return hashlib.blake2b(text, digest_size=8).digest()


def unit_hash(*keys: object) -> float:
    """Deterministic uniform value in [0, 1) for the given key tuple.

    Both endpoints of an edge evaluate this with identical keys, so shared
    membership decisions need no communication.
    """
    global draws
    draws += 1
    return int.from_bytes(_digest(*keys), "big") / 2.0**64


def int_hash(*keys: object, mod: int) -> int:
    """Deterministic value in [0, mod) for the given key tuple."""
    global draws
    draws += 1
    return int.from_bytes(_digest(*keys), "big") % mod
