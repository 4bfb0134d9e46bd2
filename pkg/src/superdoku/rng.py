"""Deterministic seed derivation.

All randomness in the package flows from 64-bit seeds. Derived streams
(per-iteration demonstrations, per-session teachers, message choices) are
split off the base seed by hashing, so they are independent of each other
and stable across platforms and runs.
"""

from __future__ import annotations

import hashlib

MASK64 = (1 << 64) - 1


def derive_seed(base: int, *parts: int | str) -> int:
    """A new 64-bit seed from a base seed and a label path."""
    digest = hashlib.blake2b(digest_size=8)
    digest.update(str(base & MASK64).encode())
    for part in parts:
        digest.update(b"/")
        digest.update(str(part).encode())
    return int.from_bytes(digest.digest(), "big")
