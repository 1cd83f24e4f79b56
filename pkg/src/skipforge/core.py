"""Shared vocabulary for every skiplist variant in this package.

Keys and values are raw byte strings.  Keys order lexicographically (a
strict prefix sorts before its extensions), which is exactly Python's
native ``bytes`` comparison, so the comparison helpers here exist mainly
to give tests and callers one named contract.

Tower heights for the probabilistic variants come from a seedable
generator (:class:`HeightSampler`) built on SplitMix64.  The generator is
integer-only, so a given seed yields the identical height sequence on
every platform; the exact constants are documented in the README so the
sequence can be reproduced outside this package.
"""
from __future__ import annotations

import enum
import struct
from dataclasses import dataclass

Key = bytes
Value = bytes

DEFAULT_P = 0.5
DEFAULT_MAX_LEVEL = 32

_U64 = (1 << 64) - 1


class Ordering(enum.IntEnum):
    """Three-way comparison result."""

    LESS = -1
    EQUAL = 0
    GREATER = 1


def compare(a: Key, b: Key) -> Ordering:
    """Lexicographic byte comparison; EQUAL iff the sequences are identical."""
    if a < b:
        return Ordering.LESS
    if a > b:
        return Ordering.GREATER
    return Ordering.EQUAL


def encode_u64(n: int) -> Key:
    """Encode an unsigned 64-bit integer as an 8-byte big-endian key.

    Big-endian keeps numeric order equal to lexicographic order of the
    encodings, so benchmark keys sort the same way as their integers.
    """
    if not 0 <= n <= _U64:
        raise ValueError(f"value out of u64 range: {n}")
    return struct.pack(">Q", n)


def decode_u64(key: Key) -> int:
    if len(key) != 8:
        raise ValueError(f"expected 8 bytes, got {len(key)}")
    return struct.unpack(">Q", key)[0]


class SplitMix64:
    """SplitMix64 pseudorandom generator.

    Small, seedable, and defined purely over 64-bit integer arithmetic,
    so its output is bit-identical everywhere.  Any 64-bit seed is valid,
    including zero.
    """

    __slots__ = ("_state",)

    GAMMA = 0x9E3779B97F4A7C15
    MIX1 = 0xBF58476D1CE4E5B9
    MIX2 = 0x94D049BB133111EB

    def __init__(self, seed: int):
        self._state = seed & _U64

    def next_u64(self) -> int:
        self._state = (self._state + self.GAMMA) & _U64
        z = self._state
        z = ((z ^ (z >> 30)) * self.MIX1) & _U64
        z = ((z ^ (z >> 27)) * self.MIX2) & _U64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform draw in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def next_below(self, bound: int) -> int:
        """Uniform-ish draw in [0, bound) via the multiply-shift reduction."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return (self.next_u64() * bound) >> 64


@dataclass(frozen=True)
class LevelGenConfig:
    """Parameters for tower-height generation.

    ``p`` is the chance a node's height extends by one more level; the
    height loop caps at ``max_level``.  Equal seeds give equal height
    sequences, always.
    """

    p: float = DEFAULT_P
    max_level: int = DEFAULT_MAX_LEVEL
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.p < 1.0:
            raise ValueError(f"p must be in [0, 1), got {self.p}")
        if self.max_level < 1:
            raise ValueError(f"max_level must be >= 1, got {self.max_level}")
        if not 0 <= self.seed <= _U64:
            raise ValueError("seed must fit in 64 bits")


class HeightSampler:
    """Draws tower heights: start at 1, promote while a u64 draw falls below
    ``p * 2**64``, stop at ``max_level``.

    The comparison is against a precomputed integer threshold so the
    promotion decision never touches floating point at draw time.
    """

    __slots__ = ("config", "_rng", "_threshold")

    def __init__(self, config: LevelGenConfig):
        self.config = config
        self._rng = SplitMix64(config.seed)
        self._threshold = int(config.p * 2.0**64)

    def random_height(self) -> int:
        h = 1
        max_level = self.config.max_level
        while h < max_level and self._rng.next_u64() < self._threshold:
            h += 1
        return h


@dataclass
class SearchStats:
    """Cost counters for one search.

    ``comparisons`` counts key comparisons.  ``link_traversals`` counts
    successor links followed, i.e. every time the search reads a next
    pointer and lands on a node to examine it (the final candidate step
    included; descents between levels are not links).
    """

    comparisons: int = 0
    link_traversals: int = 0


class InvalidRangeError(ValueError):
    """Raised when a range scan is given lo > hi."""
