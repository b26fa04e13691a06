"""Command-line benchmark driver.

Subcommands:
  run      measure one kernel over chosen sizes and worker counts
  suite    measure the full default grid
  dump-ir  print a kernel's captured trace
  report   render figures from a results file
"""

from __future__ import annotations

import argparse
import sys

from .capture import dump
from .errors import ParablError
from .harness.cases import (
    DEFAULT_SIZE,
    DEFAULT_UNROLL,
    KERNELS,
    VARIANTS,
    BenchCase,
    DEFAULT_VARIANT,
    paper_defaults,
)
from .harness.csvio import csv_write, result_rows
from .harness.mm import mm_read
from .harness.report import render_report, render_rows
from .harness.runner import capture_case, run_case, sweep_workers

# sizes small enough that a printed trace stays readable
_DUMP_SIZE = {"mod2am": 4, "mod2as": 8, "mod2f": 8, "cg": 16}


def _add_measure_args(p):
    p.add_argument("--workers", default="1",
                   help="comma-separated worker counts to sweep (default 1)")
    p.add_argument("--reps", type=int, default=5,
                   help="timed repetitions per case (default 5)")
    p.add_argument("--warmup", type=int, default=1,
                   help="untimed runs before timing (default 1)")
    p.add_argument("--seed", type=int, default=42,
                   help="input generator seed (default 42)")
    p.add_argument("--csv", default=None, metavar="FILE",
                   help="write one delimited row per repetition")
    p.add_argument("--figures", default=None, metavar="DIR",
                   help="render throughput figures next to the output")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="parabl-bench",
        description="Benchmark driver for the collective kernels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="measure one kernel configuration")
    run_p.add_argument("--kernel", required=True, choices=KERNELS)
    run_p.add_argument("--variant", default=None,
                       help="kernel variant (default: the kernel's usual one)")
    run_p.add_argument("--n", type=int, action="append", metavar="N",
                       help="problem size; repeat the flag for several sizes")
    run_p.add_argument("--fill", type=float, default=None,
                       help="nonzeros per row as a percentage (mod2as)")
    run_p.add_argument("--bw", type=int, default=None,
                       help="band stencil width, odd (cg)")
    run_p.add_argument("--u", type=int, default=None,
                       help="unroll factor (mxm2b)")
    run_p.add_argument("--verify", action="store_true",
                       help="check outputs against the serial references")
    run_p.add_argument("--matrix-market", default=None, metavar="FILE",
                       help="read the sparse operand from a coordinate file")
    _add_measure_args(run_p)

    suite_p = sub.add_parser("suite", help="measure the default grid")
    suite_p.add_argument("--paper-defaults", action="store_true",
                         help="run every kernel's default measurement grid")
    suite_p.add_argument("--kernel", default=None, choices=KERNELS,
                         help="restrict the grid to one kernel")
    suite_p.add_argument("--no-verify", action="store_true",
                         help="skip output verification")
    _add_measure_args(suite_p)

    dump_p = sub.add_parser("dump-ir", help="print a captured trace")
    dump_p.add_argument("--kernel", required=True, choices=KERNELS)
    dump_p.add_argument("--variant", default=None)
    dump_p.add_argument("--n", type=int, default=None,
                        help="problem size (default: a small readable one)")
    dump_p.add_argument("--fill", type=float, default=None)
    dump_p.add_argument("--bw", type=int, default=None)
    dump_p.add_argument("--u", type=int, default=None)
    dump_p.add_argument("--seed", type=int, default=42)
    dump_p.add_argument("--out", default=None, metavar="FILE",
                        help="write the trace here instead of stdout")

    report_p = sub.add_parser("report", help="render figures from results")
    report_p.add_argument("--csv", required=True, metavar="FILE",
                          help="results file written by run or suite")
    report_p.add_argument("--out", required=True, metavar="DIR",
                          help="directory for the rendered figures")
    return parser


def _parse_workers(text, parser):
    try:
        workers = [int(w) for w in text.split(",") if w.strip()]
    except ValueError:
        parser.error(f"--workers must be comma-separated integers, got {text!r}")
    if not workers or any(w < 1 for w in workers):
        parser.error(f"--workers needs positive integers, got {text!r}")
    return workers


def _variant_for(parser, kernel, variant):
    if variant is None:
        return DEFAULT_VARIANT[kernel]
    if variant not in VARIANTS[kernel]:
        parser.error(
            f"kernel {kernel} supports variants "
            f"{', '.join(VARIANTS[kernel])}; got {variant!r}"
        )
    return variant


def _extra_for(parser, args, kernel, variant):
    if args.fill is not None and kernel != "mod2as":
        parser.error("--fill only applies to mod2as")
    if args.bw is not None and kernel != "cg":
        parser.error("--bw only applies to cg")
    if args.u is not None and variant != "mxm2b":
        parser.error("--u only applies to the mxm2b variant")
    if kernel == "mod2as":
        if getattr(args, "matrix_market", None) is not None:
            if args.fill is not None:
                parser.error("--fill conflicts with --matrix-market")
            return None
        return args.fill
    if kernel == "cg":
        return args.bw
    if variant == "mxm2b":
        return args.u if args.u is not None else DEFAULT_UNROLL
    return None


def _print_results(results):
    for res in results:
        case = res.case
        extra = "" if case.extra is None else f" extra={case.extra:g}"
        err = "" if res.max_rel_err is None else f" max_rel_err={res.max_rel_err:.3e}"
        print(
            f"{case.kernel} {case.variant} n={case.n}{extra} "
            f"workers={case.workers} best={res.best:.6f}s "
            f"mflops={res.mflops:.2f} verified={res.verified}{err}"
        )


def _emit(results, csv_path, figures_dir):
    _print_results(results)
    if csv_path:
        csv_write(csv_path, results)
        print(f"wrote {csv_path}")
    if figures_dir:
        for path in render_rows(result_rows(results), figures_dir):
            print(f"wrote {path}")


def _cmd_run(parser, args) -> int:
    kernel = args.kernel
    variant = _variant_for(parser, kernel, args.variant)
    extra = _extra_for(parser, args, kernel, variant)
    workers = _parse_workers(args.workers, parser)
    if args.matrix_market is not None:
        if kernel != "mod2as":
            parser.error("--matrix-market only applies to mod2as")
        if args.n:
            parser.error("--n conflicts with --matrix-market")
        _, _, ptrs, nrows, _ = mm_read(args.matrix_market)
        sizes = [nrows]
    else:
        sizes = args.n or [DEFAULT_SIZE[kernel]]

    results = []
    for n in sizes:
        case = BenchCase(
            kernel=kernel,
            variant=variant,
            n=n,
            extra=extra,
            workers=workers[0],
            reps=args.reps,
            warmup=args.warmup,
            seed=args.seed,
            verify=args.verify,
            matrix_market=args.matrix_market,
        )
        if len(workers) > 1:
            results.extend(sweep_workers(case, workers))
        else:
            results.append(run_case(case))
    _emit(results, args.csv, args.figures)
    return 0


def _cmd_suite(parser, args) -> int:
    if not args.paper_defaults:
        parser.error("suite needs --paper-defaults")
    workers = _parse_workers(args.workers, parser)
    cases = paper_defaults(
        kernel=args.kernel,
        reps=args.reps,
        warmup=args.warmup,
        seed=args.seed,
        workers=workers[0],
        verify=not args.no_verify,
    )
    results = []
    for case in cases:
        if len(workers) > 1:
            results.extend(sweep_workers(case, workers))
        else:
            results.append(run_case(case))
    _emit(results, args.csv, args.figures)
    return 0


def _cmd_dump_ir(parser, args) -> int:
    kernel = args.kernel
    variant = _variant_for(parser, kernel, args.variant)
    extra = _extra_for(parser, args, kernel, variant)
    n = args.n if args.n is not None else _DUMP_SIZE[kernel]
    # clamp the free parameter to what a small dump size allows
    if kernel == "cg" and args.bw is None:
        bw = min(31, 2 * n - 1)
        extra = bw if bw % 2 else bw - 1
    elif variant == "mxm2b" and args.u is None:
        extra = min(DEFAULT_UNROLL, n)
    case = BenchCase(
        kernel=kernel, variant=variant, n=n, extra=extra,
        reps=1, warmup=0, seed=args.seed,
    )
    text = dump(capture_case(case))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_report(parser, args) -> int:
    for path in render_report(args.csv, args.out):
        print(f"wrote {path}")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "suite": _cmd_suite,
    "dump-ir": _cmd_dump_ir,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](parser, args)
    except ParablError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
