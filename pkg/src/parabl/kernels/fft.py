"""Radix-2 transform built from stream splitting and concatenation.

The input is first gathered through a bit-reversal permutation.  Each
stage then deinterleaves the working vector into even and odd streams,
forms their sum and twiddled difference, and concatenates the halves.
With the data entering in bit-reversed order, stage s of an n-point
transform multiplies the difference stream by the base pattern

    R_s[p] = exp(-2*pi*i * rev(p) / M),  M = n >> s,  p < M/2

(rev over log2(M/2) bits) tiled 2**s times; after log2(n) stages the
spectrum sits in natural order.  All stage vectors are precomputed
into a plan so the data path is pure collectives and captures cleanly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..containers import DenseVector, ElemKind, from_host
from ..errors import KindError, ParameterError, ShapeError
from ..ops import (
    MapKernel,
    cat,
    ewise,
    map_elements,
    register_map_kernel,
    section,
)

GATHER = register_map_kernel(
    MapKernel(
        "gather",
        lambda i, src: src[i],
        ElemKind.COMPLEX128,
        batch=lambda idx, src: src[idx],
    )
)


def _bit_reverse(n: int) -> np.ndarray:
    # rev[j] = j with its log2(n) bits reversed
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev = (rev << 1) | ((idx >> b) & 1)
    return rev


@dataclass(frozen=True)
class FftPlan:
    """Precomputed permutation and twiddle vectors for one size."""

    n: int
    tangle: DenseVector  # i32, tangle[j] = bit-reverse of j
    twiddles: DenseVector  # c128, twiddles[j] = exp(-2*pi*i*j/n), j < n/2
    stage_twiddles: tuple  # c128 vectors, one per stage, each n/2 long


def make_fft_plan(n: int) -> FftPlan:
    """Plan an n-point transform; n must be a power of two."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParameterError(f"transform size must be a positive integer, got {n!r}")
    if n & (n - 1):
        raise ParameterError(f"transform size must be a power of two, got {n}")
    tangle = from_host(_bit_reverse(n).astype(np.int32), n)
    twiddles = from_host(np.exp((-2j * np.pi / n) * np.arange(n // 2)), n // 2)
    stages = []
    for s in range(n.bit_length() - 1):
        m = n >> s
        half = m >> 1
        base = np.exp((-2j * np.pi / m) * _bit_reverse(half))
        stages.append(from_host(np.tile(base, 1 << s), n // 2))
    return FftPlan(
        n=n, tangle=tangle, twiddles=twiddles, stage_twiddles=tuple(stages)
    )


def _splitstream(f, tangle, stage_twiddles):
    data = map_elements(GATHER, (tangle,), aux=(f,))
    half = tangle.length // 2
    for tw in stage_twiddles:
        even = section(data, 0, half, 2)
        odd = section(data, 1, half, 2)
        up = ewise("+", even, odd)
        down = ewise("*", ewise("-", even, odd), tw)
        data = cat(up, down)
    return data


def fft_forward(plan: FftPlan, f: DenseVector) -> DenseVector:
    """Forward transform of a c128 vector matching the plan's size."""
    if not isinstance(plan, FftPlan):
        raise KindError("fft_forward expects an FftPlan")
    if not isinstance(f, DenseVector):
        raise KindError("fft_forward expects a vector")
    if f.kind is not ElemKind.COMPLEX128:
        raise KindError(f"signal must be c128, got {f.kind.value}")
    if f.length != plan.n:
        raise ShapeError(
            f"signal has length {f.length}, plan is for {plan.n} points"
        )
    return _splitstream(f, plan.tangle, plan.stage_twiddles)
