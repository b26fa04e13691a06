"""Benchmark input builders, all deterministic in the seed.

Paired operands (the b matrix, the multiplied vector) draw from
seed + 1 so both sides of a product never share a stream.
"""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from .rng import SplitMix64


def gen_dense(n: int, seed: int) -> np.ndarray:
    """Row-major n x n matrix of doubles in [0, 1)."""
    return SplitMix64(seed).fill_doubles(n * n).reshape(n, n)


def gen_vector(n: int, seed: int) -> np.ndarray:
    """Vector of doubles in [0, 1)."""
    return SplitMix64(seed).fill_doubles(n)


def gen_signal(n: int, seed: int) -> np.ndarray:
    """Complex signal with re/im parts interleaved from one stream.

    2n doubles are drawn; even draws become real parts and odd draws
    imaginary parts, each scaled to (-1, 1).
    """
    d = 2.0 * SplitMix64(seed).fill_doubles(2 * n) - 1.0
    return d[0::2] + 1j * d[1::2]


def gen_sparse(n: int, fill: float, seed: int):
    """Random n x n compressed-row matrix with fill% nonzeros per row.

    Each row holds k = max(1, round(fill * n / 100)) distinct sorted
    columns.  Columns come from rejection rounds on the seed stream:
    each round draws the still-missing count of words, maps them mod n,
    and keeps first occurrences in draw order.  Values are in (-1, 1).

    Returns (vals, cols, ptrs) host arrays.
    """
    if n < 1:
        raise ParameterError(f"matrix order must be positive, got {n}")
    k = max(1, round(fill * n / 100.0))
    if k > n:
        raise ParameterError(
            f"fill {fill}% asks for {k} distinct columns in rows of {n}"
        )
    rng = SplitMix64(seed)
    cols = np.empty(n * k, dtype=np.int64)
    for r in range(n):
        seen = set()
        chosen = []
        while len(chosen) < k:
            draws = rng.fill_u64(k - len(chosen)) % np.uint64(n)
            for c in draws.tolist():
                if c not in seen:
                    seen.add(c)
                    chosen.append(c)
        chosen.sort()
        cols[r * k : (r + 1) * k] = chosen
    vals = 2.0 * rng.fill_doubles(n * k) - 1.0
    ptrs = np.arange(0, n * k + 1, k, dtype=np.int64)
    return vals, cols, ptrs


def gen_banded_spd(n: int, bw: int):
    """Banded symmetric positive definite matrix in compressed rows.

    Bandwidth bw counts the full stencil width and must be odd with
    3 <= bw <= 2n - 1.  Off-diagonal entries inside the band are -1 and
    the diagonal is bw, which keeps every row strictly diagonally
    dominant.  Returns (vals, cols, ptrs) host arrays.
    """
    if not isinstance(bw, int) or isinstance(bw, bool):
        raise ParameterError(f"bandwidth must be an integer, got {bw!r}")
    if bw % 2 == 0 or not 3 <= bw <= 2 * n - 1:
        raise ParameterError(
            f"bandwidth must be odd and within [3, {2 * n - 1}], got {bw}"
        )
    h = (bw - 1) // 2
    rows = np.arange(n, dtype=np.int64)
    starts = np.maximum(0, rows - h)
    ends = np.minimum(n - 1, rows + h)
    counts = ends - starts + 1
    ptrs = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=ptrs[1:])
    total = int(ptrs[-1])
    row_ids = np.repeat(rows, counts)
    pos = np.arange(total, dtype=np.int64) - np.repeat(ptrs[:-1], counts)
    cols = starts[row_ids] + pos
    vals = np.where(cols == row_ids, float(bw), -1.0)
    return vals, cols, ptrs
