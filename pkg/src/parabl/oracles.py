"""Independent reference implementations used to check kernel output.

These work on plain numpy arrays, never on the library's containers or
collectives, so a defect in the operation layer cannot hide in the
reference results.  Each is written for clarity over speed and is
capped at sizes where it still finishes quickly; verification above a
cap is reported as skipped rather than attempted.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError, ShapeError, SingularError

# largest sizes the references handle in reasonable time
MXM_ORACLE_CAP = 2048
DFT_ORACLE_CAP = 8192
SOLVE_ORACLE_CAP = 512


def mxm_naive(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Dense product with additions applied in ascending-k order.

    Equivalent, bit for bit, to the scalar triple loop with k outermost:
    every c[i, j] accumulates its k products in the same order.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeError("mxm_naive expects two 2-D arrays")
    m, k = a.shape
    k2, n = b.shape
    if k != k2:
        raise ShapeError(f"inner dimensions differ: {k} vs {k2}")
    if max(m, k, n) > MXM_ORACLE_CAP:
        raise ParameterError(f"mxm_naive is capped at {MXM_ORACLE_CAP}")
    c = np.zeros((m, n), dtype=np.float64)
    tmp = np.empty((m, n), dtype=np.float64)
    for kk in range(k):
        np.multiply(a[:, kk, None], b[kk, :], out=tmp)
        np.add(c, tmp, out=c)
    return c


def spmv_serial(
    matvals: np.ndarray,
    indx: np.ndarray,
    rowp: np.ndarray,
    invec: np.ndarray,
) -> np.ndarray:
    """Compressed-row product accumulated per row in storage order."""
    vals = np.asarray(matvals, dtype=np.float64).tolist()
    cols = np.asarray(indx).tolist()
    ptrs = np.asarray(rowp).tolist()
    x = np.asarray(invec, dtype=np.float64).tolist()
    if len(ptrs) < 1:
        raise ShapeError("row pointer array must have at least one entry")
    nrows = len(ptrs) - 1
    out = np.empty(nrows, dtype=np.float64)
    for r in range(nrows):
        acc = 0.0
        for p in range(ptrs[r], ptrs[r + 1]):
            acc += vals[p] * x[cols[p]]
        out[r] = acc
    return out


def dft_naive(f: np.ndarray) -> np.ndarray:
    """Direct O(n^2) transform: out[k] = sum_j f[j] * exp(-2*pi*i*j*k/n).

    Phases come from a single table indexed by j*k mod n, which keeps
    every angle in [0, 2*pi) regardless of n.
    """
    f = np.asarray(f, dtype=np.complex128)
    if f.ndim != 1:
        raise ShapeError("dft_naive expects a 1-D array")
    n = f.shape[0]
    if n > DFT_ORACLE_CAP:
        raise ParameterError(f"dft_naive is capped at {DFT_ORACLE_CAP}")
    if n == 0:
        return np.empty(0, dtype=np.complex128)
    j = np.arange(n, dtype=np.int64)
    table = np.exp((-2j * np.pi / n) * np.arange(n))
    out = np.empty(n, dtype=np.complex128)
    for k in range(n):
        out[k] = np.dot(f, table[(k * j) % n])
    return out


def dense_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a @ x = b by Gaussian elimination with partial pivoting."""
    u = np.array(a, dtype=np.float64)
    x = np.array(b, dtype=np.float64)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ShapeError("dense_solve expects a square matrix")
    n = u.shape[0]
    if x.shape != (n,):
        raise ShapeError(f"right-hand side must have shape ({n},)")
    if n > SOLVE_ORACLE_CAP:
        raise ParameterError(f"dense_solve is capped at {SOLVE_ORACLE_CAP}")
    for k in range(n):
        p = k + int(np.argmax(np.abs(u[k:, k])))
        if u[p, k] == 0.0:
            raise SingularError(f"zero pivot in column {k}")
        if p != k:
            u[[k, p]] = u[[p, k]]
            x[[k, p]] = x[[p, k]]
        mult = u[k + 1 :, k] / u[k, k]
        u[k + 1 :, k + 1 :] -= mult[:, None] * u[k, k + 1 :]
        u[k + 1 :, k] = 0.0
        x[k + 1 :] -= mult * x[k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - np.dot(u[k, k + 1 :], x[k + 1 :])) / u[k, k]
    return x
