"""Deterministic random-stream derivation.

Every randomized stage draws from a substream derived by hashing a master
seed together with a structural key (student id, category, duplicate index,
and so on). Results are therefore independent of execution order and of the
platform's hash randomization.
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(*parts) -> int:
    """Hash arbitrary key parts into a stable 64-bit seed."""
    joined = b"\x1f".join(str(p).encode("utf-8") for p in parts)
    digest = hashlib.sha256(joined).digest()
    return int.from_bytes(digest[:8], "big")


def substream(*parts) -> random.Random:
    """A fresh Random generator keyed by the given parts."""
    return random.Random(derive_seed(*parts))
