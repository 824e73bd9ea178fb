"""Command-line front end.

Commands: det (matrix determinant), resultant (Sylvester route),
census (root-friendly prime tally), predict (runtime forecast), and
resume (continue a checkpointed run). Exit codes: 0 success, 1 usage,
2 parse error, 3 planning failure, 4 workspace error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ParseError, PlanningError, WorkspaceError
from .modular import census
from .parsing import (
    format_polynomial,
    parse_matrix_document,
    parse_pair_document,
)
from .pipeline import PipelineConfig, plan, predict, resume_report, run_report
from .resultant import sylvester

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_PLANNING = 3
EXIT_WORKSPACE = 4


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_pipeline_flags(sub):
    sub.add_argument("--workspace", help="checkpoint directory (enables resume)")
    sub.add_argument("--threads", type=int, default=1, help="worker threads (results never change)")
    sub.add_argument("--chunk-size", type=int, default=4096, help="nodes per determinant chunk")
    sub.add_argument("--primes-min", type=int, default=2, help="minimum number of primes")
    sub.add_argument("--prime-start", type=int, default=10**9, help="prime scan start")
    sub.add_argument("--scan-limit", type=int, default=1_000_000, help="prime scan candidate cap")
    sub.add_argument("--report", action="store_true", help="print per-stage wall times")
    sub.add_argument("--json", action="store_true", help="emit a machine-readable report")


def _config(args) -> PipelineConfig:
    return PipelineConfig(
        prime_start=args.prime_start,
        min_primes=args.primes_min,
        scan_limit=args.scan_limit,
        workers=args.threads,
        chunk_size=args.chunk_size,
    )


def _emit(args, result, timings, pl):
    text = format_polynomial(result.terms(), result.axis_vars)
    if args.json:
        payload = {
            "determinant": text,
            "variables": list(result.axis_vars),
            "order": pl.r,
            "unique_entries": pl.unique_count,
            "primes": [spec.p for spec in pl.primes],
            "stage_seconds": timings.as_dict(),
        }
        print(json.dumps(payload, sort_keys=True))
        return
    print(text)
    if args.report:
        print()
        print(f"{'FFT(s)':>10} {'DET(s)':>10} {'IFFT(s)':>10} {'CRT(s)':>10}")
        print(
            f"{timings.fft:>10.3f} {timings.det:>10.3f}"
            f" {timings.ifft:>10.3f} {timings.crt:>10.3f}"
        )
        print(f"primes ({pl.prime_count}): " + " ".join(str(s.p) for s in pl.primes))
        print(f"unique entries: {pl.unique_count} of {pl.r * pl.r} (mu = {float(pl.mu):g})")


def _cmd_det(args) -> int:
    document = _read(args.infile)
    matrix = parse_matrix_document(document)
    result, timings, pl = run_report(matrix, _config(args), args.workspace)
    _emit(args, result, timings, pl)
    return EXIT_OK


def _cmd_resultant(args) -> int:
    document = _read(args.infile)
    variables, f, g = parse_pair_document(document)
    matrix = sylvester(f, g, variables, args.var)
    result, timings, pl = run_report(matrix, _config(args), args.workspace)
    _emit(args, result, timings, pl)
    return EXIT_OK


def _cmd_census(args) -> int:
    orders = [int(n) for n in args.orders.split(",") if n.strip()]
    result = census(orders, prime_count=args.count, lower=args.above)
    print(" ".join(str(result.counts[n]) for n in orders))
    if args.detailed:
        print(" ".join(str(result.exact_counts[n]) for n in orders))
    return EXIT_OK


def _cmd_predict(args) -> int:
    document = _read(args.infile)
    matrix = parse_matrix_document(document)
    pl = plan(matrix, _config(args))
    forecast = predict(matrix, pl, args.sample)
    print(f"primes: {forecast.prime_count}")
    print(f"order: {forecast.order}")
    print(f"unique entries: {forecast.unique_count} (mu = {float(forecast.replication):g})")
    print(f"sampled transform seconds: {[round(s, 4) for s in forecast.sample_seconds]}")
    print(f"mean (rounded): {forecast.mean_rounded}")
    print(f"predicted total seconds: {forecast.total_seconds}")
    return EXIT_OK


def _cmd_resume(args) -> int:
    result, timings, pl = resume_report(args.workspace, _config_resume(args))
    _emit(args, result, timings, pl)
    return EXIT_OK


def _config_resume(args) -> PipelineConfig:
    return PipelineConfig(workers=args.threads, chunk_size=args.chunk_size)


def _read(path) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polydet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    det = sub.add_parser("det", help="exact determinant of a polynomial matrix")
    det.add_argument("--in", dest="infile", required=True, help="matrix document")
    _add_pipeline_flags(det)
    det.set_defaults(func=_cmd_det)

    res = sub.add_parser("resultant", help="resultant of two polynomials")
    res.add_argument("--in", dest="infile", required=True, help="two-polynomial document")
    res.add_argument("--var", required=True, help="variable to eliminate")
    _add_pipeline_flags(res)
    res.set_defaults(func=_cmd_resultant)

    cen = sub.add_parser("census", help="count primes admitting two-power roots")
    cen.add_argument("--orders", default="64,128,256,512,4096,8192,65536")
    cen.add_argument("--count", type=int, default=10_000, help="primes to examine")
    cen.add_argument("--above", type=int, default=10**9, help="lower bound for the scan")
    cen.add_argument(
        "--detailed",
        action="store_true",
        help="also print exact two-power-part counts on a second line",
    )
    cen.set_defaults(func=_cmd_census)

    pre = sub.add_parser("predict", help="forecast runtime from sampled transforms")
    pre.add_argument("--in", dest="infile", required=True, help="matrix document")
    pre.add_argument("--sample", type=int, default=3, help="entries to time")
    _add_pipeline_flags(pre)
    pre.set_defaults(func=_cmd_predict)

    rst = sub.add_parser("resume", help="continue a checkpointed run")
    rst.add_argument("--workspace", required=True, help="checkpoint directory")
    rst.add_argument("--threads", type=int, default=1)
    rst.add_argument("--chunk-size", type=int, default=4096)
    rst.add_argument("--report", action="store_true")
    rst.add_argument("--json", action="store_true")
    rst.set_defaults(func=_cmd_resume)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"polydet: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PlanningError as exc:
        print(f"polydet: planning failed: {exc}", file=sys.stderr)
        return EXIT_PLANNING
    except WorkspaceError as exc:
        print(f"polydet: workspace error: {exc}", file=sys.stderr)
        return EXIT_WORKSPACE
    except (OSError, ValueError) as exc:
        print(f"polydet: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main():
    raise SystemExit(main())
