"""Seeded random streams shared by the Python API and the compiled kernel.

The scheduler consumes raw 64-bit words from a PCG64 generator through a
buffer, so the compiled kernel and any pure-Python replay of a run see exactly
the same word sequence regardless of how the run is split into calls.
Bounded integers use Lemire's multiply-and-reject method on the upper 32 bits
of each word, which is unbiased for every bound up to 2**32.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MASK64 = (1 << 64) - 1
_U32 = np.uint64(32)
_LOW32 = np.uint64(0xFFFFFFFF)
_TWO32 = np.uint64(1 << 32)

# Enough for one scheduler step with many rejections; a step never starts
# with fewer words than this left in the buffer.
STEP_RESERVE = 64


@njit(cache=True)
def bounded(raw, rp, s):
    """Uniform integer in ``[0, s)`` drawn from ``raw`` at position ``rp[0]``."""
    su = np.uint64(s)
    x = raw[rp[0]] >> _U32
    rp[0] += 1
    m = x * su
    low = m & _LOW32
    if low < su:
        t = (_TWO32 - su) % su
        while low < t:
            x = raw[rp[0]] >> _U32
            rp[0] += 1
            m = x * su
            low = m & _LOW32
    return np.int64(m >> _U32)


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def trial_seed(base_seed: int, n: int, trial: int) -> int:
    """Seed for trial ``trial`` at population size ``n``.

    ``base_seed XOR splitmix64(splitmix64(n) XOR trial)``, all in 64 bits.
    """
    return (base_seed & MASK64) ^ splitmix64(splitmix64(n) ^ (trial & MASK64))


class RawStream:
    """Buffered stream of raw PCG64 words with a shared read cursor."""

    block = 1 << 16

    def __init__(self, seed: int | None = None, bit_generator: np.random.PCG64 | None = None):
        self.bit_generator = bit_generator if bit_generator is not None else np.random.PCG64(seed)
        self.buf = self.bit_generator.random_raw(self.block)
        self.pos = np.zeros(1, dtype=np.int64)

    def ensure(self, need: int = STEP_RESERVE) -> None:
        left = len(self.buf) - int(self.pos[0])
        if left >= need:
            return
        fresh = self.bit_generator.random_raw(max(self.block, need))
        self.buf = np.concatenate([self.buf[self.pos[0]:], fresh])
        self.pos[0] = 0

    def below(self, s: int) -> int:
        if s < 1 or s > 1 << 32:
            raise ValueError(f"bound {s} outside [1, 2**32]")
        self.ensure()
        return int(bounded(self.buf, self.pos, s))

    def jumped(self, jumps: int = 1) -> "RawStream":
        """Independent stream advanced by ``jumps`` * 2**127 steps."""
        return RawStream(bit_generator=self.bit_generator.jumped(jumps))

    @classmethod
    def spawn(cls, seed: int, count: int) -> list["RawStream"]:
        children = np.random.SeedSequence(seed).spawn(count)
        return [cls(bit_generator=np.random.PCG64(c)) for c in children]
