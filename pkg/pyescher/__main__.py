import argparse
import json
import logging
import sys

from pydantic import ValidationError

# Our files
from pyescher import sweep
from pyescher.__version__ import VERSION
from pyescher.enums import ReportFormat, Suite
from pyescher.errors import CalibrationError, ReportMergeError, SweepConfigError
from pyescher.escher import DEFAULT_CONVENTION, calibrate_convention
from pyescher.report import SweepConfig, VerificationReport
from pyescher.symcore import Partition

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pyescher",
        description="Exhaustive checks of Escher and chromatic symmetric function identities on unit interval orders.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for progress, -vv for debug output"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("sweep", help="verify every UIO of one size")
    run.add_argument("--n", type=int, required=True, help="UIO size N")
    run.add_argument("--lambda", dest="lam", default="all", help="n,k or all")
    run.add_argument(
        "--suites",
        default=",".join(s.value for s in Suite),
        help="comma-separated subset of " + ", ".join(s.value for s in Suite),
    )
    run.add_argument("--jobs", type=int, default=None, help=f"worker processes (default ${sweep.JOBS_ENV} or 1)")
    run.add_argument("--out", default=None, help="report path")
    run.add_argument("--format", choices=[f.value for f in ReportFormat], default="json")
    run.add_argument("--resume", action="store_true", help="skip tasks recorded in <out>.progress")
    run.add_argument("--shard", default=None, help="i/m: only UIOs whose index is i mod m")
    run.add_argument("--timings", action="store_true", help="record durations in the report")

    check = commands.add_parser("check", help="inspect one UIO and one partition")
    check.add_argument("--h", required=True, help='Hessenberg vector, e.g. "2,3,3"')
    check.add_argument("--lambda", dest="lam", required=True, help="partition, e.g. 2,1")
    check.add_argument("--trace", action="store_true", help="print the phi/psi trace of every Escher")

    single = commands.add_parser("escher", help="trace phi and psi on one Escher")
    single.add_argument("--h", required=True, help='Hessenberg vector, e.g. "2,3,3"')
    single.add_argument("--w", required=True, help='Escher through every element, e.g. "1,3,2"')
    single.add_argument("--lambda", dest="lam", required=True, help="n,k with n > k, e.g. 2,1")

    calibrate = commands.add_parser("calibrate", help="search for the anchor convention")
    calibrate.add_argument("--max-n", type=int, default=8)

    merge = commands.add_parser("merge", help="merge partial JSON reports")
    merge.add_argument("out")
    merge.add_argument("inputs", nargs="+")

    graph = commands.add_parser("graph", help="e-expansion and sinks of a graph file")
    graph.add_argument("file", nargs="?", help="vertex count, then one \"i j\" edge per line")
    graph.add_argument("--h", default=None, help="use the incomparability graph of this UIO instead")
    return parser


def print_summary(report: VerificationReport):
    summary = report.summary
    print(f"{summary.uios} UIOs, {summary.checks} checks, {summary.failures} failures")
    if summary.unasserted_failures:
        print(f"{summary.unasserted_failures} unasserted checks failed")
    for name in summary.failed:
        print(f"FAIL {name}")
    if summary.wall_time is not None:
        print(f"wall time {summary.wall_time}s")


def do_sweep(args) -> int:
    jobs = args.jobs if args.jobs is not None else sweep.default_jobs()
    config = SweepConfig(
        n=args.n,
        lambda_filter=args.lam,
        suites=[Suite(s.strip()) for s in args.suites.split(",") if s.strip()],
        jobs=jobs,
        out_path=args.out,
        format=ReportFormat(args.format),
        resume=args.resume,
        shard=args.shard,
        timings=args.timings,
    )
    report = sweep.run_sweep(config)
    print_summary(report)
    if args.out:
        print(f"report written to {args.out}")
    return EXIT_FAILURES if report.summary.failures else EXIT_OK


def do_check(args) -> int:
    lines, ok = sweep.check_single(args.h, Partition.from_string(args.lam), DEFAULT_CONVENTION, args.trace)
    for line in lines:
        print(line)
    return EXIT_OK if ok else EXIT_FAILURES


def do_escher(args) -> int:
    lines, ok = sweep.inspect_escher(args.h, args.w, Partition.from_string(args.lam), DEFAULT_CONVENTION)
    for line in lines:
        print(line)
    return EXIT_OK if ok else EXIT_FAILURES


def do_calibrate(args) -> int:
    try:
        conv = calibrate_convention(args.max_n)
    except CalibrationError as e:
        print(f"calibration failed: {e.message}")
        print(json.dumps(e.payload, indent=2, sort_keys=True))
        return EXIT_FAILURES
    print(json.dumps(conv.as_dictionary(), indent=2, sort_keys=True))
    if conv != DEFAULT_CONVENTION:
        print("note: differs from the built-in default convention")
    return EXIT_OK


def do_merge(args) -> int:
    report = sweep.merge_files(args.inputs)
    sweep.atomic_write(args.out, sweep.render(report, ReportFormat.JSON))
    print_summary(report)
    return EXIT_FAILURES if report.summary.failures else EXIT_OK


def do_graph(args) -> int:
    if (args.file is None) == (args.h is None):
        raise ValueError("give either a graph file or --h")
    if args.h is not None:
        text = sweep.uio_graph_text(args.h)
        print(text, end="")
    else:
        with open(args.file, encoding="utf-8") as handle:
            text = handle.read()
    for line in sweep.describe_graph(text):
        print(line)
    return EXIT_OK


COMMANDS = {
    "sweep": do_sweep,
    "check": do_check,
    "escher": do_escher,
    "calibrate": do_calibrate,
    "merge": do_merge,
    "graph": do_graph,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (SweepConfigError, ReportMergeError, ValidationError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logging.getLogger(__name__).exception("aborted")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
