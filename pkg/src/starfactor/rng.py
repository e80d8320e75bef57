"""Seeded random streams.

Every stream is a Philox counter-based generator keyed by a ``SeedSequence``
built from the user seed plus a tuple of stream labels, so the same labels
give the same draws on every platform and independent labels never collide.
"""

from __future__ import annotations

import zlib

import numpy as np


def _label(x) -> int:
    if isinstance(x, (int, np.integer)):
        return int(x)
    return zlib.crc32(str(x).encode("utf-8"))


def stream(seed, *labels) -> np.random.Generator:
    """Return the generator for ``seed`` and the given stream labels.

    ``seed`` may be an int or a sequence of ints; labels may be ints or
    strings (strings are hashed with CRC32).
    """
    if isinstance(seed, (list, tuple)):
        entropy = [_label(s) for s in seed]
    else:
        entropy = [_label(seed)]
    entropy.extend(_label(x) for x in labels)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def derive_seed(seed, *labels) -> int:
    """A 63-bit integer seed derived deterministically from ``seed`` and labels."""
    return int(stream(seed, "derive", *labels).integers(0, 2**63 - 1))
