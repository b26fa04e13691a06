"""Conjugate gradient solver over compressed-row matrices.

Classic unpreconditioned iteration for symmetric positive definite
systems.  The residual recurrence r2 = r . r drives the stopping test
r2 <= eps^2 * (b . b), so the iterate satisfies |r| <= eps * |b| up to
recurrence drift.  The sparse product is pluggable between the two
row-kernel variants.

The iteration count is data dependent: a captured trace unrolls the
loop as the example inputs drove it and replays that exact schedule.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..containers import DenseVector, ElemKind
from ..errors import BreakdownError, KindError, ParameterError, ShapeError
from ..ops import add_reduce, ewise, fill, scale
from .spmv import SPMV_VARIANTS, CsrMatrix, _spmv1_stream, _spmv2_stream

_STREAMS = {
    "spmv1": _spmv1_stream,
    "spmv2": _spmv2_stream,
}


@dataclass(frozen=True)
class CgResult:
    """Solution vector, iterations taken, and final r . r."""

    x: DenseVector
    iters: int
    rr: float


def _cg_stream(matvals, indx, rowp, n, b, eps, max_iters, spmv_stream):
    x = fill(n, ElemKind.REAL64, 0.0)
    r = b
    p = b
    r2 = add_reduce(ewise("*", r, r))
    stop = (eps * eps) * r2
    iters = 0
    while float(r2) > float(stop) and iters < max_iters:
        ap = spmv_stream(matvals, indx, rowp, n, p)
        pap = add_reduce(ewise("*", p, ap))
        if float(pap) <= 0.0:
            raise BreakdownError(
                f"non-positive curvature p.Ap = {float(pap)} at iteration "
                f"{iters}; matrix is not positive definite"
            )
        alpha = r2 / pap
        r = ewise("-", r, scale(ap, alpha))
        r2_new = add_reduce(ewise("*", r, r))
        beta = r2_new / r2
        x = ewise("+", x, scale(p, alpha))
        p = ewise("+", r, scale(p, beta))
        r2 = r2_new
        iters += 1
    return x, iters, r2


def cg_solve(
    mat: CsrMatrix,
    b: DenseVector,
    eps: float = 1e-8,
    max_iters: int | None = None,
    variant: str = "spmv2",
) -> CgResult:
    """Solve mat @ x = b from a zero start.

    Stops when r . r falls to eps^2 * (b . b) or after max_iters
    iterations (default 2n).  Raises BreakdownError when the matrix
    reveals itself as not positive definite.
    """
    if not isinstance(mat, CsrMatrix):
        raise KindError("cg_solve expects a CsrMatrix")
    if mat.nrows != mat.ncols:
        raise ShapeError(
            f"cg_solve needs a square matrix, got {mat.nrows}x{mat.ncols}"
        )
    if not isinstance(b, DenseVector):
        raise KindError("cg_solve expects a vector right-hand side")
    if b.kind is not ElemKind.REAL64:
        raise KindError(f"right-hand side must be f64, got {b.kind.value}")
    if b.length != mat.nrows:
        raise ShapeError(
            f"right-hand side has length {b.length}, matrix has "
            f"{mat.nrows} rows"
        )
    stream = _STREAMS.get(variant)
    if stream is None:
        raise ParameterError(
            f"sparse product variant must be one of "
            f"{sorted(_STREAMS)}, got {variant!r}"
        )
    if not isinstance(eps, float) or not eps > 0.0:
        raise ParameterError(f"eps must be a positive float, got {eps!r}")
    if max_iters is None:
        max_iters = 2 * mat.nrows
    if not isinstance(max_iters, int) or isinstance(max_iters, bool) or max_iters < 1:
        raise ParameterError(
            f"max_iters must be a positive integer, got {max_iters!r}"
        )
    x, iters, r2 = _cg_stream(
        mat.matvals, mat.indx, mat.rowp, mat.nrows, b, eps, max_iters, stream
    )
    return CgResult(x=x, iters=iters, rr=float(r2))


# re-exported so callers can pick the product by the same names
CG_SPMV_VARIANTS = tuple(sorted(SPMV_VARIANTS))
