"""Figure rendering for benchmark results.

Figures are derived from the same rows the delimited output carries:
per-kernel throughput against problem size, plus a worker-scaling
figure when any configuration was swept over more than one worker
count.  Rendering uses the Agg backend and writes PNG files.
"""

from __future__ import annotations

import os
from collections import defaultdict

from .cases import KERNELS
from .csvio import csv_read


def _best_throughput(rows):
    # (kernel, variant, workers, n) -> max mflops over reps
    best = {}
    for row in rows:
        key = (row["kernel"], row["variant"], row["workers"], row["n"])
        mf = row["mflops"]
        if key not in best or mf > best[key]:
            best[key] = mf
    return best


def render_rows(rows, out_dir: str) -> list:
    """Write throughput and scaling figures; returns the file paths."""
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    os.makedirs(out_dir, exist_ok=True)
    written = []
    best = _best_throughput(rows)

    by_kernel = defaultdict(lambda: defaultdict(dict))
    for (kernel, variant, workers, n), mf in best.items():
        by_kernel[kernel][(variant, workers)][n] = mf

    for kernel in KERNELS:
        series = by_kernel.get(kernel)
        if not series:
            continue
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for (variant, workers), points in sorted(series.items()):
            ns = sorted(points)
            label = variant if workers == 1 else f"{variant}, {workers} workers"
            ax.plot(ns, [points[n] for n in ns], marker="o", label=label)
        ax.set_xscale("log", base=2 if kernel == "mod2f" else 10)
        ax.set_xlabel("problem size n")
        ax.set_ylabel("MFLOP/s")
        ax.set_title(f"{kernel} throughput")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend()
        fig.tight_layout()
        path = os.path.join(out_dir, f"{kernel}.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

    # scaling figure: any (kernel, variant, n) measured at several
    # worker counts
    sweeps = defaultdict(dict)
    for (kernel, variant, workers, n), mf in best.items():
        sweeps[(kernel, variant, n)][workers] = mf
    sweeps = {k: v for k, v in sweeps.items() if len(v) > 1 and 1 in v}
    if sweeps:
        fig, ax = plt.subplots(figsize=(7, 4.5))
        max_w = 1
        for (kernel, variant, n), per_w in sorted(sweeps.items()):
            ws = sorted(per_w)
            max_w = max(max_w, ws[-1])
            speedup = [per_w[w] / per_w[1] for w in ws]
            ax.plot(ws, speedup, marker="o", label=f"{kernel}/{variant} n={n}")
        ax.plot([1, max_w], [1, max_w], ls="--", c="gray", label="ideal")
        ax.set_xlabel("workers")
        ax.set_ylabel("speedup over 1 worker")
        ax.set_title("worker scaling")
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = os.path.join(out_dir, "scaling.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written


def render_report(csv_path: str, out_dir: str) -> list:
    """Render figures from a results file."""
    return render_rows(csv_read(csv_path), out_dir)
