"""Benchmark kernels built on the collective operations."""

from .cg import CgResult, cg_solve
from .fft import FftPlan, fft_forward, make_fft_plan
from .mxm import MXM_VARIANTS, mxm0, mxm1, mxm2a, mxm2b
from .spmv import SPMV_VARIANTS, CsrMatrix, csr_from_host, spmv1, spmv2

__all__ = [
    "CgResult",
    "CsrMatrix",
    "FftPlan",
    "MXM_VARIANTS",
    "SPMV_VARIANTS",
    "cg_solve",
    "csr_from_host",
    "fft_forward",
    "make_fft_plan",
    "mxm0",
    "mxm1",
    "mxm2a",
    "mxm2b",
    "spmv1",
    "spmv2",
]
