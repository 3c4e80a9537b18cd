"""Stable seed derivation for nested RNG streams.

Python's builtin ``hash`` is salted per process, so every derived seed
goes through sha256 instead.  The same parts always give the same seed,
on any platform, in any process.
"""

import hashlib


def derive_seed(*parts) -> int:
    """Mix arbitrary parts (ints, strings) into a 63-bit seed."""
    blob = "\x1f".join(repr(p) for p in parts).encode("utf-8")
    digest = hashlib.sha256(blob).digest()
    return int.from_bytes(digest[:8], "big") >> 1
