"""Deterministic per-component seeds derived from the single run seed."""

from __future__ import annotations

import hashlib


def derive_seed(seed: int, component: str) -> int:
    """32-bit seed from ``sha256("<seed>:<component>")``."""
    digest = hashlib.sha256(f"{int(seed)}:{component}".encode()).digest()
    return int.from_bytes(digest[:4], "big")
