"""Deterministic random streams.

All randomness in the package flows through Philox, a counter-based bit
generator whose output is reproducible across platforms and numpy builds
for a fixed key.  Streams are derived from a user seed plus a short label
(hashed to an integer), so ensemble member i of one experiment never shares
a stream with member i of another.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["make_generator", "stream_key"]


def stream_key(label: str) -> int:
    """Stable 64-bit integer derived from a stream label."""
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def make_generator(seed: int, stream: str = "", member: int = 0) -> np.random.Generator:
    """Philox generator keyed by (seed, stream label, member index)."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, stream_key(stream), int(member)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))
