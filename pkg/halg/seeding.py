"""
halg/seeding.py

Named, splittable random generators for the verifier. A generator is keyed by a
root seed and any number of string labels, so the stream a check sees depends on
(root, case, check) only, never on execution order or worker count.

Usage:
    rng = rng_for(7, "S3/<(0 1)>", "quotient-associativity")
"""

import hashlib

import numpy as np


def derive_seed(root: int, *labels: str) -> int:
    """64-bit child seed from sha256(root, labels)."""
    h = hashlib.sha256(str(int(root)).encode("utf-8"))
    for label in labels:
        h.update(b"\x00")
        h.update(str(label).encode("utf-8"))
    return int.from_bytes(h.digest()[:8], "big")


def rng_for(root: int, *labels: str) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(root), derive_seed(root, *labels)]))
