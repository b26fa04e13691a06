"""Delimited output for benchmark results.

One row per repetition.  The header and column order are part of the
tool's contract; floats are written with repr so a read back followed
by a rewrite reproduces the file byte for byte.
"""

from __future__ import annotations

import csv

from ..errors import FormatError

HEADER = (
    "kernel",
    "variant",
    "n",
    "extra",
    "workers",
    "rep",
    "seconds",
    "mflops",
    "verified",
    "max_rel_err",
)

_VERIFIED = ("pass", "fail", "skipped")


def _extra_text(extra) -> str:
    if extra is None:
        return ""
    if isinstance(extra, float) and extra.is_integer():
        return str(int(extra))
    return repr(extra)


def result_rows(results) -> list:
    """Flatten BenchResults to one dict per repetition."""
    rows = []
    for res in results:
        case = res.case
        for rep, sec in enumerate(res.seconds, start=1):
            rows.append(
                {
                    "kernel": case.kernel,
                    "variant": case.variant,
                    "n": case.n,
                    "extra": _extra_text(case.extra),
                    "workers": case.workers,
                    "rep": rep,
                    "seconds": sec,
                    "mflops": res.flops / sec / 1e6,
                    "verified": res.verified,
                    "max_rel_err": res.max_rel_err,
                }
            )
    return rows


def csv_write_rows(path: str, rows) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(HEADER)
        for row in rows:
            err = row["max_rel_err"]
            out.writerow(
                [
                    row["kernel"],
                    row["variant"],
                    str(row["n"]),
                    row["extra"],
                    str(row["workers"]),
                    str(row["rep"]),
                    repr(float(row["seconds"])),
                    repr(float(row["mflops"])),
                    row["verified"],
                    "" if err is None else repr(float(err)),
                ]
            )


def csv_write(path: str, results) -> None:
    """Write one delimited row per (result, repetition)."""
    csv_write_rows(path, result_rows(results))


def csv_read(path: str) -> list:
    """Read rows written by csv_write; inverse of csv_write_rows."""
    with open(path, "r", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file")
        if tuple(header) != HEADER:
            raise FormatError(
                f"{path}: header {header!r} does not match {','.join(HEADER)}"
            )
        rows = []
        for lineno, rec in enumerate(reader, start=2):
            if len(rec) != len(HEADER):
                raise FormatError(
                    f"{path}:{lineno}: expected {len(HEADER)} fields, got "
                    f"{len(rec)}"
                )
            try:
                row = {
                    "kernel": rec[0],
                    "variant": rec[1],
                    "n": int(rec[2]),
                    "extra": rec[3],
                    "workers": int(rec[4]),
                    "rep": int(rec[5]),
                    "seconds": float(rec[6]),
                    "mflops": float(rec[7]),
                    "verified": rec[8],
                    "max_rel_err": None if rec[9] == "" else float(rec[9]),
                }
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: {exc}")
            if row["verified"] not in _VERIFIED:
                raise FormatError(
                    f"{path}:{lineno}: bad verified value {rec[8]!r}"
                )
            rows.append(row)
    return rows
