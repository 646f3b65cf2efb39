"""Deterministic pseudo-random streams used everywhere randomness is needed.

The generator is SplitMix64 (Steele, Lea & Flood's mixing function, public
domain), chosen because it is tiny enough to restate exactly and therefore
reproducible bit-for-bit in any language:

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z <- state
    z <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9  mod 2^64
    z <- (z XOR (z >> 27)) * 0x94D049BB133111EB  mod 2^64
    output = z XOR (z >> 31)

Derived values:
  * uniform doubles take the top 53 bits of an output word, divided by 2^53;
  * normals come from the Box-Muller transform on two uniforms (the first
    uniform is nudged off zero so log() is defined);
  * named streams hash their label with FNV-1a (64-bit) and mix it into the
    seed, so independent purposes ("mix", "noise", ...) never share a state.

Everything that samples, shuffles, or initialises weights in this package
goes through this module; regenerating with the same seed is byte-stable.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def _fnv1a(label: str) -> int:
    h = _FNV_OFFSET
    for byte in label.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


class SplitMix64:
    """Sequential SplitMix64 generator over a 64-bit state."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) / float(1 << 53)
        return lo + (hi - lo) * u

    def normal(self, mean: float = 0.0, std: float = 1.0) -> float:
        # Box-Muller; u1 shifted away from 0 so log(u1) is finite.
        u1 = ((self.next_u64() >> 11) + 1) / float((1 << 53) + 1)
        u2 = (self.next_u64() >> 11) / float(1 << 53)
        return mean + std * math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def randint(self, n: int) -> int:
        """Integer in [0, n) by rejection, so every value is equally likely."""
        if n <= 0:
            raise ValueError(f"randint bound must be positive, got {n}")
        limit = (_MASK64 + 1) - ((_MASK64 + 1) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def choice(self, items):
        return items[self.randint(len(items))]

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates, high index downward."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(i + 1)
            items[i], items[j] = items[j], items[i]


def stream(seed: int, label: str) -> SplitMix64:
    """Named sub-stream: the label keeps distinct purposes statistically apart."""
    return SplitMix64((seed & _MASK64) ^ _fnv1a(label))
