"""Counter-based hashing for reproducible, order-independent random numbers.

Rendering jitter must not depend on evaluation order or worker count, so
instead of a stateful generator each sample derives its randomness from a
hash of (seed, pixel, sample index).  The mixer is the splitmix64 finalizer,
which passes the usual avalanche tests and vectorizes cleanly with numpy
uint64 arithmetic.
"""

from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)

_U64_TO_UNIT = 2.0 ** -53


def splitmix64(x):
    """Finalizer of the splitmix64 generator; maps uint64 -> well-mixed uint64."""
    z = np.asarray(x, dtype=np.uint64) + _GAMMA
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def hash_combine(*keys):
    """Hash an arbitrary tuple of integer keys/arrays into one uint64.

    Broadcasts across array keys, so ``hash_combine(seed, xs, ys, s)``
    yields one independent value per element.
    """
    h = np.uint64(0)
    for k in keys:
        h = splitmix64(h ^ np.asarray(k, dtype=np.uint64))
    return h


def hash_unit(*keys):
    """Like :func:`hash_combine` but mapped to float64 in [0, 1)."""
    return (hash_combine(*keys) >> np.uint64(11)).astype(np.float64) * _U64_TO_UNIT


def derive_seed(seed: int, stream: int) -> int:
    """Derive an independent 64-bit sub-seed for a named stream."""
    return int(hash_combine(np.uint64(seed), np.uint64(stream)))
