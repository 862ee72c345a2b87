"""Seedable 64-bit generator used wherever the package consumes randomness.

Runs must replay bit-identically from a recorded seed, on any platform and
any Python build, so the generator is pinned here rather than borrowed from
``random`` (which only guarantees stream stability for ``random()``, not for
its integer helpers).

The generator is SplitMix64: one 64-bit state word advanced by a fixed odd
constant, with three xor-shift-multiply mixes per output. ``randbelow`` uses
rejection sampling, so small-range draws are exactly uniform.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Deterministic PRNG; equal seeds give equal streams everywhere."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n), exact via rejection."""
        if n <= 0:
            raise ValueError("randbelow needs n >= 1")
        limit = (MASK64 + 1) - ((MASK64 + 1) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both ends included."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.randbelow(hi - lo + 1)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def choice(self, seq):
        return seq[self.randbelow(len(seq))]


def derive_seed(master: int, *indices: int) -> int:
    """Child seed for an indexed substream of a master seed.

    Each index is folded in through one SplitMix64 output, so derived
    streams do not overlap the master stream or each other for distinct
    index tuples.
    """
    s = master & MASK64
    for k in indices:
        g = SplitMix64(s ^ (((k + 1) * _GAMMA) & MASK64))
        s = g.next_u64()
    return s


def fresh_seed() -> int:
    """Nondeterministic 64-bit seed for callers that were not given one."""
    import os

    return int.from_bytes(os.urandom(8), "big")
