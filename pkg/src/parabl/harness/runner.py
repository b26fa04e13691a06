"""Case execution: input setup, timing, verification, and capture."""

from __future__ import annotations

import hashlib
from dataclasses import replace
from time import perf_counter

import numpy as np

from ..capture import Trace, capture
from ..containers import from_host, to_host
from ..errors import ParablError
from ..execution import ExecutionConfig, OptLevel, execution
from ..kernels.cg import _cg_stream, cg_solve
from ..kernels.fft import _splitstream, fft_forward, make_fft_plan
from ..kernels.mxm import MXM_VARIANTS, mxm2b
from ..kernels.spmv import (
    SPMV_VARIANTS,
    _spmv1_stream,
    _spmv2_stream,
    csr_from_host,
)
from ..oracles import (
    DFT_ORACLE_CAP,
    MXM_ORACLE_CAP,
    dft_naive,
    mxm_naive,
    spmv_serial,
)
from .cases import (
    DEFAULT_BANDWIDTH,
    DEFAULT_FILL,
    DEFAULT_UNROLL,
    BenchCase,
    BenchResult,
    flop_count,
)
from .generators import gen_banded_spd, gen_dense, gen_signal, gen_sparse, gen_vector
from .mm import mm_read

# verification bounds; the dense product bound additionally scales
# with the matrix order
MXM_TOL_PER_N = 1e-12
SPMV_TOL = 1e-13
FFT_TOL = 1e-9
CG_TOL = 1e-7

_CG_STREAMS = {"cg-spmv1": _spmv1_stream, "cg-spmv2": _spmv2_stream}


def _rel_linf(out: np.ndarray, ref: np.ndarray) -> float:
    denom = float(np.max(np.abs(ref)))
    err = float(np.max(np.abs(out - ref))) if out.size else 0.0
    return err / denom if denom > 0.0 else err


class _Prepared:
    """A case bound to concrete inputs and a zero-argument runner."""

    __slots__ = ("case", "run", "output_of", "verify", "nnz", "host")

    def __init__(self, case, run, output_of, verify, nnz, host):
        self.case = case
        self.run = run
        self.output_of = output_of
        self.verify = verify
        self.nnz = nnz
        self.host = host


def _prepare(case: BenchCase) -> _Prepared:
    kernel = case.kernel
    seed = case.seed
    if kernel == "mod2am":
        n = case.n
        a_host = gen_dense(n, seed)
        b_host = gen_dense(n, seed + 1)
        a = from_host(a_host, (n, n))
        b = from_host(b_host, (n, n))
        if case.variant == "mxm2b":
            u = DEFAULT_UNROLL if case.extra is None else int(case.extra)
            run = lambda: mxm2b(a, b, u)
        else:
            fn = MXM_VARIANTS[case.variant]
            run = lambda: fn(a, b)

        def verify(out):
            if n > MXM_ORACLE_CAP:
                return "skipped", None
            err = _rel_linf(
                to_host(out).reshape(n, n), mxm_naive(a_host, b_host)
            )
            return ("pass" if err <= MXM_TOL_PER_N * n else "fail"), err

        return _Prepared(case, run, lambda out: out, verify, None, (a_host, b_host))

    if kernel == "mod2as":
        if case.matrix_market is not None:
            vals, cols, ptrs, nrows, ncols = mm_read(case.matrix_market)
        else:
            nrows = ncols = case.n
            vals, cols, ptrs = gen_sparse(case.n, _fill_of(case), seed)
        mat = csr_from_host(vals, cols, ptrs, ncols)
        x_host = gen_vector(ncols, seed + 1)
        x = from_host(x_host, ncols)
        fn = SPMV_VARIANTS[case.variant]
        run = lambda: fn(mat, x)

        def verify(out):
            err = _rel_linf(to_host(out), spmv_serial(vals, cols, ptrs, x_host))
            return ("pass" if err <= SPMV_TOL else "fail"), err

        return _Prepared(
            case, run, lambda out: out, verify, int(vals.shape[0]),
            (vals, cols, ptrs, x_host),
        )

    if kernel == "mod2f":
        n = case.n
        sig = gen_signal(n, seed)
        f = from_host(sig, n)
        plan = make_fft_plan(n)
        run = lambda: fft_forward(plan, f)

        def verify(out):
            if n > DFT_ORACLE_CAP:
                return "skipped", None
            scale = n * float(np.max(np.abs(sig)))
            err = float(np.max(np.abs(to_host(out) - dft_naive(sig)))) / scale
            return ("pass" if err <= FFT_TOL else "fail"), err

        return _Prepared(case, run, lambda out: out, verify, None, (sig, plan))

    # cg
    n = case.n
    bw = DEFAULT_BANDWIDTH if case.extra is None else int(case.extra)
    vals, cols, ptrs = gen_banded_spd(n, bw)
    mat = csr_from_host(vals, cols, ptrs, n)
    # right-hand side is the matrix applied to the all-ones vector
    b_host = np.add.reduceat(vals, ptrs[:-1])
    b = from_host(b_host, n)
    spmv_name = case.variant.removeprefix("cg-")
    run = lambda: cg_solve(mat, b, variant=spmv_name)

    def verify(res):
        x = to_host(res.x)
        residual = spmv_serial(vals, cols, ptrs, x) - b_host
        ratio = float(np.linalg.norm(residual) / np.linalg.norm(b_host))
        return ("pass" if ratio <= CG_TOL else "fail"), ratio

    return _Prepared(
        case, run, lambda res: res.x, verify, int(vals.shape[0]),
        (vals, cols, ptrs, b_host),
    )


def _fill_of(case: BenchCase) -> float:
    return DEFAULT_FILL if case.extra is None else float(case.extra)


def run_case(case: BenchCase) -> BenchResult:
    """Generate inputs, time the kernel, and verify the last output.

    Input setup and verification run outside the timed region.  The
    digest fingerprints the output bytes so runs can be compared
    across worker counts.
    """
    prep = _prepare(case)
    config = ExecutionConfig(OptLevel.PARALLEL, case.workers)
    with execution(config):
        for _ in range(case.warmup):
            result = prep.run()
        seconds = []
        for _ in range(case.reps):
            t0 = perf_counter()
            result = prep.run()
            seconds.append(perf_counter() - t0)
    out = prep.output_of(result)
    digest = hashlib.sha256(to_host(out).tobytes()).hexdigest()
    if case.verify:
        verified, max_rel_err = prep.verify(result)
    else:
        verified, max_rel_err = "skipped", None
    iters = result.iters if case.kernel == "cg" else None
    flops = flop_count(case, nnz=prep.nnz, iters=iters)
    return BenchResult(
        case=case,
        seconds=tuple(seconds),
        flops=flops,
        verified=verified,
        max_rel_err=max_rel_err,
        digest=digest,
        nnz=prep.nnz,
        iters=iters,
    )


def sweep_workers(case: BenchCase, workers) -> list:
    """Run one case across worker counts; outputs must agree exactly."""
    results = []
    for w in workers:
        results.append(run_case(replace(case, workers=w)))
    digests = {res.digest for res in results}
    if len(digests) > 1:
        raise ParablError(
            f"{case.kernel}/{case.variant} n={case.n}: output digests differ "
            f"across worker counts {list(workers)}"
        )
    return results


def run_cases(cases) -> list:
    """run_case over a list, preserving order."""
    return [run_case(c) for c in cases]


def capture_case(case: BenchCase) -> Trace:
    """Record the case's kernel as a replayable trace.

    Containers enter as explicit trace inputs; structural sizes and
    plan shapes are baked into the recorded program.
    """
    prep = _prepare(case)
    kernel = case.kernel
    if kernel == "mod2am":
        a_host, b_host = prep.host
        n = case.n
        a = from_host(a_host, (n, n))
        b = from_host(b_host, (n, n))
        if case.variant == "mxm2b":
            u = DEFAULT_UNROLL if case.extra is None else int(case.extra)
            return capture(lambda x, y: mxm2b(x, y, u), a, b)
        fn = MXM_VARIANTS[case.variant]
        return capture(fn, a, b)

    if kernel == "mod2as":
        vals, cols, ptrs, x_host = prep.host
        nrows = ptrs.shape[0] - 1
        ncols = x_host.shape[0]
        mat = csr_from_host(vals, cols, ptrs, ncols)
        x = from_host(x_host, ncols)
        stream = _spmv1_stream if case.variant == "spmv1" else _spmv2_stream
        return capture(
            lambda mv, ix, rp, iv: stream(mv, ix, rp, nrows, iv),
            mat.matvals,
            mat.indx,
            mat.rowp,
            x,
        )

    if kernel == "mod2f":
        sig, plan = prep.host
        f = from_host(sig, case.n)
        return capture(
            lambda s, tg, *tws: _splitstream(s, tg, tws),
            f,
            plan.tangle,
            *plan.stage_twiddles,
        )

    vals, cols, ptrs, b_host = prep.host
    n = case.n
    mat = csr_from_host(vals, cols, ptrs, n)
    b = from_host(b_host, n)
    stream = _CG_STREAMS[case.variant]
    return capture(
        lambda mv, ix, rp, rhs: _cg_stream(
            mv, ix, rp, n, rhs, 1e-8, 2 * n, stream
        )[0],
        mat.matvals,
        mat.indx,
        mat.rowp,
        b,
    )
