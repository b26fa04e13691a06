"""Reader for MatrixMarket coordinate files.

Supports real-valued coordinate matrices, general or symmetric.  In
symmetric files each off-diagonal entry stands for both mirrored
positions, whichever triangle it is stored in.  Duplicate coordinates
are summed.  The result is compressed-row arrays with columns sorted
within each row.

Every rejection names the offending line number.
"""

from __future__ import annotations

import numpy as np

from ..errors import ParseError

_HEADER_PREFIX = "%%matrixmarket"


def mm_read(path: str):
    """Parse a coordinate file into (vals, cols, ptrs, nrows, ncols)."""
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty file", line=1)

    fields = lines[0].strip().lower().split()
    if not lines[0].strip().lower().startswith(_HEADER_PREFIX):
        raise ParseError("missing MatrixMarket header", line=1)
    if len(fields) != 5 or fields[1] != "matrix":
        raise ParseError(f"bad header {lines[0].strip()!r}", line=1)
    if fields[2] != "coordinate":
        raise ParseError(f"unsupported layout {fields[2]!r}", line=1)
    if fields[3] != "real":
        raise ParseError(f"unsupported value type {fields[3]!r}", line=1)
    if fields[4] not in ("general", "symmetric"):
        raise ParseError(f"unsupported symmetry {fields[4]!r}", line=1)
    symmetric = fields[4] == "symmetric"

    # size line: first non-comment, non-blank line after the header
    pos = 1
    while pos < len(lines) and (
        not lines[pos].strip() or lines[pos].lstrip().startswith("%")
    ):
        pos += 1
    if pos == len(lines):
        raise ParseError("missing size line", line=len(lines))
    parts = lines[pos].split()
    if len(parts) != 3:
        raise ParseError(
            f"size line needs rows, columns, entries; got {lines[pos].strip()!r}",
            line=pos + 1,
        )
    try:
        nrows, ncols, declared = (int(p) for p in parts)
    except ValueError:
        raise ParseError(f"bad size line {lines[pos].strip()!r}", line=pos + 1)
    if nrows < 0 or ncols < 0 or declared < 0:
        raise ParseError("sizes must be non-negative", line=pos + 1)

    rows = []
    cols = []
    vals = []
    stored = 0  # entry lines seen, before symmetric mirroring
    for idx in range(pos + 1, len(lines)):
        text = lines[idx].strip()
        if not text or text.startswith("%"):
            continue
        parts = text.split()
        if len(parts) != 3:
            raise ParseError(
                f"entry needs row, column, value; got {text!r}", line=idx + 1
            )
        try:
            i = int(parts[0])
            j = int(parts[1])
            v = float(parts[2])
        except ValueError:
            raise ParseError(f"bad entry {text!r}", line=idx + 1)
        if stored == declared:
            raise ParseError(
                f"more than the declared {declared} entries", line=idx + 1
            )
        if not 1 <= i <= nrows or not 1 <= j <= ncols:
            raise ParseError(
                f"coordinate ({i}, {j}) outside {nrows} x {ncols}", line=idx + 1
            )
        stored += 1
        rows.append(i - 1)
        cols.append(j - 1)
        vals.append(v)
        if symmetric and i != j:
            rows.append(j - 1)
            cols.append(i - 1)
            vals.append(v)

    if stored != declared:
        raise ParseError(
            f"file declares {declared} entries but stores {stored}",
            line=len(lines),
        )

    r = np.asarray(rows, dtype=np.int64)
    c = np.asarray(cols, dtype=np.int64)
    v = np.asarray(vals, dtype=np.float64)
    order = np.lexsort((c, r))
    r, c, v = r[order], c[order], v[order]
    if r.shape[0]:
        # collapse duplicate coordinates by summation
        first = np.ones(r.shape[0], dtype=bool)
        first[1:] = (r[1:] != r[:-1]) | (c[1:] != c[:-1])
        starts = np.nonzero(first)[0]
        v = np.add.reduceat(v, starts)
        r = r[starts]
        c = c[starts]
    ptrs = np.zeros(nrows + 1, dtype=np.int64)
    np.cumsum(np.bincount(r, minlength=nrows), out=ptrs[1:])
    return v, c, ptrs, nrows, ncols
