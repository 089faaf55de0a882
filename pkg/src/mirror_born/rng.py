"""Counter-based splitmix64 generator.

The state advances by a fixed odd constant on every draw, so the ``i``-th output
of a stream depends only on ``seed + (i + 1) * GAMMA``.  That makes vectorized
generation and exact sharding trivial: shard ``s`` starting at draw ``start``
just uses the root seed advanced by ``start`` steps.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB
_DOUBLE_UNIT = 2.0**-53


def mix64(z: int) -> int:
    """splitmix64 output finalizer on a Python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _MUL2) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    # uint64 array arithmetic wraps modulo 2**64
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MUL1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MUL2)
    return z ^ (z >> np.uint64(31))


def advance(seed: int, steps: int) -> int:
    """State after ``steps`` draws from a stream started at ``seed``."""
    return (seed + steps * GAMMA) & MASK64


def check_seed(seed: int) -> int:
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed <= MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = check_seed(seed)

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def next_double(self) -> float:
        return (self.next_u64() >> 11) * _DOUBLE_UNIT

    def u64s(self, n: int) -> np.ndarray:
        offsets = np.arange(1, n + 1, dtype=np.uint64) * np.uint64(GAMMA)
        out = _mix64_array(np.uint64(self.state) + offsets)
        self.state = advance(self.state, n)
        return out

    def doubles(self, n: int) -> np.ndarray:
        """``n`` uniforms on [0, 1), identical to ``n`` calls of :meth:`next_double`."""
        return (self.u64s(n) >> np.uint64(11)).astype(np.float64) * _DOUBLE_UNIT

    def uniform(self, low: float, high: float, n: int) -> np.ndarray:
        return low + (high - low) * self.doubles(n)


def shard_schedule(n: int, shards: int) -> list[tuple[int, int]]:
    """Contiguous ``(start, count)`` blocks covering ``n`` draws.

    The first ``n % shards`` blocks get one extra draw.
    """
    if shards < 1:
        raise ValueError("shards must be >= 1")
    base, extra = divmod(n, shards)
    blocks, start = [], 0
    for s in range(shards):
        count = base + (1 if s < extra else 0)
        blocks.append((start, count))
        start += count
    return blocks


def derive_stream(seed: int, label: int) -> int:
    """Independent stream seed derived from ``seed`` by a fixed label constant."""
    return mix64(check_seed(seed) ^ mix64(label))
