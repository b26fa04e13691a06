"""Seeded generator for reproducible benchmark inputs.

SplitMix64: state advances by a fixed odd gamma and each output is a
bit-mixing hash of the new state.  Because output k depends only on
seed + (k+1)*gamma, a whole block of outputs can be produced in one
vectorized pass; fill_u64(n) matches n successive next_u64() calls
exactly, so scalar and bulk paths are interchangeable.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_DOUBLE_SCALE = 2.0**-53


class SplitMix64:
    """Deterministic 64-bit stream; identical on every platform."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def next_double(self) -> float:
        # 53 uniform bits in [0, 1)
        return (self.next_u64() >> 11) * _DOUBLE_SCALE

    def fill_u64(self, n: int) -> np.ndarray:
        if n < 0:
            raise ValueError(f"negative count {n}")
        steps = np.arange(1, n + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self._state) + np.uint64(_GAMMA) * steps
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
            z = z ^ (z >> np.uint64(31))
        self._state = (self._state + n * _GAMMA) & _MASK
        return z

    def fill_doubles(self, n: int) -> np.ndarray:
        return (self.fill_u64(n) >> np.uint64(11)).astype(np.float64) * _DOUBLE_SCALE
