"""Keyed deterministic randomness built on splitmix64.

Every key-driven choice in the toolkit (shot selection, bitplane
permutation, disorder masks, the noise attack) goes through these
primitives, so the same 64-bit keys reproduce the same bits on any
platform. splitmix64 was picked because it is tiny, fast and trivial
to port.
"""

import numpy as np

MASK64 = (1 << 64) - 1

_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """One splitmix64 step: advance by the golden gamma, then finalize."""
    x = (x + _GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * _MIX1) & MASK64
    x = ((x ^ (x >> 27)) * _MIX2) & MASK64
    return x ^ (x >> 31)


def mix64_np(x: np.ndarray) -> np.ndarray:
    """Vectorized mix64 over uint64 arrays (wrapping arithmetic)."""
    x = x + np.uint64(_GOLDEN)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_MIX1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_MIX2)
    return x ^ (x >> np.uint64(31))


def hash64(seed: int, *words: int) -> int:
    """Hash a seed plus integer words into one 64-bit value.

    Chains mix64 over the words; order matters.
    """
    h = seed & MASK64
    for w in words:
        h = mix64(h ^ (w & MASK64))
    return h


class SplitMix64:
    """Sequential splitmix64 stream."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        # Modulo reduction; the bias is irrelevant at the bounds used here
        # and keeps the draw sequence trivially portable.
        return self.next_u64() % bound


def stream(seed: int, count: int) -> np.ndarray:
    """First `count` outputs of the splitmix64 stream for `seed`.

    Uses the counter form (output i = finalize(seed + i*gamma)) so the
    whole stream vectorizes; matches SplitMix64.next_u64 exactly.
    """
    idx = np.arange(1, count + 1, dtype=np.uint64)
    x = np.uint64(seed & MASK64) + idx * np.uint64(_GOLDEN)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_MIX1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_MIX2)
    return x ^ (x >> np.uint64(31))


def permutation(n: int, seed: int) -> np.ndarray:
    """Keyed Fisher-Yates permutation of range(n).

    Swaps from the top index down; each step draws one splitmix64 value
    reduced modulo the remaining prefix length.
    """
    rng = SplitMix64(seed)
    p = np.arange(n, dtype=np.int64)
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        p[i], p[j] = p[j], p[i]
    return p


def gaussian(seed: int, count: int) -> np.ndarray:
    """`count` standard normal deviates via Box-Muller over splitmix64."""
    pairs = (count + 1) // 2
    raw = stream(seed, 2 * pairs)
    u1 = (raw[:pairs].astype(np.float64) + 1.0) * 2.0**-64  # (0, 1], log-safe
    u2 = raw[pairs:].astype(np.float64) * 2.0**-64
    r = np.sqrt(-2.0 * np.log(u1))
    theta = (2.0 * np.pi) * u2
    z = np.concatenate([r * np.cos(theta), r * np.sin(theta)])
    return z[:count]
