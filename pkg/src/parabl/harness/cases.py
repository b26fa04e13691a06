"""Benchmark case descriptions and the default measurement suite."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from ..errors import ParameterError

KERNELS = ("mod2am", "mod2as", "mod2f", "cg")

VARIANTS = {
    "mod2am": ("mxm0", "mxm1", "mxm2a", "mxm2b"),
    "mod2as": ("spmv1", "spmv2"),
    "mod2f": ("splitstream",),
    "cg": ("cg-spmv1", "cg-spmv2"),
}

DEFAULT_VARIANT = {
    "mod2am": "mxm2b",
    "mod2as": "spmv2",
    "mod2f": "splitstream",
    "cg": "cg-spmv2",
}

DEFAULT_SIZE = {"mod2am": 512, "mod2as": 1000, "mod2f": 1024, "cg": 512}

# measurement grids for the default suite
MXM_SIZES = (10, 20, 50, 100, 192, 200, 500, 512, 576, 1000, 1024, 2000, 2048)

SPARSE_CONFIGS = (
    (100, 3.50),
    (200, 3.75),
    (256, 5.00),
    (400, 4.38),
    (500, 5.00),
    (512, 4.00),
    (960, 4.50),
    (1000, 5.00),
    (1024, 5.50),
    (2000, 7.50),
    (4096, 3.50),
    (4992, 4.00),
    (5000, 4.00),
    (9984, 4.50),
    (10000, 5.00),
    (10240, 5.72),
)

FFT_SIZES = tuple(1 << k for k in range(8, 21))  # 256 .. 1048576

CG_CONFIGS = (
    (128, 3),
    (128, 31),
    (128, 63),
    (256, 3),
    (256, 31),
    (256, 63),
    (256, 127),
    (512, 3),
    (512, 31),
    (512, 63),
    (512, 127),
    (512, 255),
    (1024, 3),
    (1024, 31),
    (1024, 63),
    (1024, 127),
    (1024, 255),
    (1024, 511),
)

DEFAULT_UNROLL = 8
DEFAULT_FILL = 5.0
DEFAULT_BANDWIDTH = 31


@dataclass(frozen=True)
class BenchCase:
    """One benchmark configuration: what to run and how to measure it.

    extra carries the per-kernel free parameter: fill percentage for
    mod2as, bandwidth for cg, unroll factor for mxm2b, nothing
    otherwise.
    """

    kernel: str
    variant: str
    n: int
    extra: Optional[float] = None
    workers: int = 1
    reps: int = 5
    warmup: int = 1
    seed: int = 42
    verify: bool = False
    matrix_market: Optional[str] = None

    def __post_init__(self):
        if self.kernel not in KERNELS:
            raise ParameterError(f"unknown kernel {self.kernel!r}")
        if self.variant not in VARIANTS[self.kernel]:
            raise ParameterError(
                f"kernel {self.kernel} has no variant {self.variant!r}"
            )
        if self.matrix_market is None and self.n < 1:
            raise ParameterError(f"size must be positive, got {self.n}")
        if self.workers < 1:
            raise ParameterError(f"workers must be positive, got {self.workers}")
        if self.reps < 1:
            raise ParameterError(f"reps must be positive, got {self.reps}")
        if self.warmup < 0:
            raise ParameterError(f"warmup must be non-negative, got {self.warmup}")
        if self.matrix_market is not None and self.kernel != "mod2as":
            raise ParameterError(
                "matrix files are only supported for the sparse product"
            )


@dataclass
class BenchResult:
    """Timings and checks for one case; seconds holds every rep."""

    case: BenchCase
    seconds: tuple
    flops: int
    verified: str  # "pass" | "fail" | "skipped"
    max_rel_err: Optional[float]
    digest: str
    nnz: Optional[int] = None
    iters: Optional[int] = None

    @property
    def best(self) -> float:
        return min(self.seconds)

    @property
    def mflops(self) -> float:
        return self.flops / self.best / 1e6


def flop_count(case: BenchCase, *, nnz: int = None, iters: int = None) -> int:
    """Nominal floating-point work for one kernel invocation."""
    n = case.n
    if case.kernel == "mod2am":
        return 2 * n**3
    if case.kernel == "mod2as":
        if nnz is None:
            raise ParameterError("sparse product flops need nnz")
        return 2 * nnz
    if case.kernel == "mod2f":
        return int(5 * n * math.log2(n)) if n > 1 else 0
    if nnz is None or iters is None:
        raise ParameterError("solver flops need nnz and iters")
    return iters * (2 * nnz + 10 * n)


def paper_defaults(
    kernel: Optional[str] = None,
    reps: int = 5,
    warmup: int = 1,
    seed: int = 42,
    workers: int = 1,
    verify: bool = True,
) -> list:
    """The full measurement grid with each kernel's default variant."""
    cases = []
    common = dict(
        workers=workers, reps=reps, warmup=warmup, seed=seed, verify=verify
    )
    if kernel in (None, "mod2am"):
        for n in MXM_SIZES:
            cases.append(
                BenchCase("mod2am", "mxm2b", n, extra=DEFAULT_UNROLL, **common)
            )
    if kernel in (None, "mod2as"):
        for n, fill in SPARSE_CONFIGS:
            cases.append(BenchCase("mod2as", "spmv2", n, extra=fill, **common))
    if kernel in (None, "mod2f"):
        for n in FFT_SIZES:
            cases.append(BenchCase("mod2f", "splitstream", n, **common))
    if kernel in (None, "cg"):
        for n, bw in CG_CONFIGS:
            cases.append(BenchCase("cg", "cg-spmv2", n, extra=bw, **common))
    if not cases:
        raise ParameterError(f"unknown kernel {kernel!r}")
    return cases
