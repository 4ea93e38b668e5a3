"""``paritypoly`` command line: projection, decoding and the benchmarks.

Exit status is 0 on success, 1 for usage errors (bad flags or flag values)
and 2 for data errors (unreadable or malformed alist files, bad LLR input).
"""

from __future__ import annotations

import argparse
import re
import sys

import numpy as np

from . import admm, bench
from .fix import project
from .geometry import ParityKind
from .opcount import Algorithm

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt_real(v: float) -> str:
    """Shortest round-tripping decimal, no exponent or trailing zeros (1.0 -> '1')."""
    return np.format_float_positional(float(v) + 0.0, trim="-")


def parse_degrees(text: str) -> tuple[int, ...]:
    """``'2..50'``, ``'2..=50'``, ``'2-50'``, ``'8'`` or a comma list like ``'2,4,8..10'``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        m = re.fullmatch(r"(\d+)\s*(?:\.\.=?|-)\s*(\d+)", part)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if lo > hi:
                raise argparse.ArgumentTypeError(f"empty degree range {part!r}")
            out.extend(range(lo, hi + 1))
        elif part.isdigit():
            out.append(int(part))
        else:
            raise argparse.ArgumentTypeError(f"cannot read degree range {part!r}")
    return tuple(dict.fromkeys(out))


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (v > 0 and np.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text!r}")
    return v


def _seed(text):
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _algorithms(text):
    try:
        return tuple(dict.fromkeys(Algorithm.parse(a) for a in text.split(",") if a.strip()))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _kind(text):
    try:
        return ParityKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _reals(text):
    try:
        return [float(t) for t in re.split(r"[,\s]+", text.strip()) if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot read real numbers from {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="paritypoly",
                     description="Parity polytope projection, ADMM LP decoding and op-count benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("project", help="project a vector onto a parity polytope")
    p.add_argument("x", nargs="+", type=float, help="input components")
    p.add_argument("--kind", type=_kind, default=ParityKind.EVEN, help="even (default) or odd")
    p.add_argument("--trace", action="store_true", help="also print the iteration trace")

    p = sub.add_parser("decode", help="decode one frame with the ADMM LP decoder")
    p.add_argument("--alist", required=True, help="parity-check matrix in alist format")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--llr", type=_reals, help="channel LLRs, comma separated; write --llr=-1,2,... when the first is negative")
    src.add_argument("--received", type=_reals, help="received BPSK samples (LLR = 2y/sigma^2), same syntax as --llr")
    src.add_argument("--noiseless", action="store_true",
                     help="all-zeros codeword, no noise (samples all +1)")
    p.add_argument("--sigma", type=_positive_float, default=0.5,
                   help="AWGN standard deviation (default 0.5); without --llr/--received "
                        "the all-zeros codeword is sent through this channel")
    p.add_argument("--seed", type=_seed, default=0, help="noise seed (default 0)")
    p.add_argument("--rho", type=_positive_float, default=1.0)
    p.add_argument("--max-iters", type=_positive_int, default=1000)
    p.add_argument("--algos", default="fix",
                   help="projector: fix (default), oracle, zhang-siegel, wasson-draper")
    p.add_argument("--literal-sign", action="store_true",
                   help="use the u - z sign in the x-update instead of z - u")

    def bench_parser(name, help, algos):
        b = sub.add_parser(name, help=help)
        b.add_argument("--degrees", type=parse_degrees, default=tuple(range(2, 51)),
                       help="degrees, e.g. 2..50 (default), 2-20 or 4,8,16")
        b.add_argument("--range", dest="half_range", type=_positive_float, default=10.0,
                       help="inputs uniform on [-a, a) (default 10)")
        b.add_argument("--trials", type=_positive_int, default=bench.DEFAULT_TRIALS)
        b.add_argument("--seed", type=_seed, default=0)
        b.add_argument("--workers", type=_positive_int, default=1,
                       help="worker threads; the output does not depend on it")
        b.add_argument("--kind", type=_kind, default=ParityKind.EVEN)
        if algos:
            b.add_argument("--algos", type=_algorithms, default=tuple(Algorithm),
                           help="comma list of fix, zhang-siegel, wasson-draper (default all)")
        b.add_argument("--csv-out", help="write the CSV here instead of stdout")
        b.add_argument("--svg-out", help="also plot to this SVG file (needs matplotlib)")
        return b

    bench_parser("bench-ops", "mean operation counts per degree and algorithm", True)
    bench_parser("bench-prob", "probability that the clamped input is infeasible", False)
    bench_parser("bench-iters", "mean iterations of the fast projection, hard case", False)
    return parser


def _cmd_project(args, out):
    try:
        res = project(np.array(args.x), args.kind)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(" ".join(fmt_real(v) for v in res.z), file=out)
    if args.trace:
        t = res.trace
        print(f"terminated_by: {t.terminated_by.name}", file=out)
        print(f"iterations: {t.iterations}", file=out)
        for k, v in enumerate(t.hyperplane_points):
            shown = " ".join("-" if np.isnan(c) else fmt_real(c) for c in v)
            print(f"hyperplane {k + 1}: {shown}", file=out)
        for i, val in t.fixed_components:
            print(f"fixed: x[{i}] = {fmt_real(val)}", file=out)


def _cmd_decode(args, out):
    try:
        h = admm.read_alist(args.alist)
    except OSError as exc:
        raise DataError(f"cannot read {args.alist}: {exc.strerror or exc}") from None
    except admm.AlistParseError as exc:
        raise DataError(str(exc)) from None
    if args.llr is not None:
        llr = np.array(args.llr)
    else:
        if args.received is not None:
            y = np.array(args.received)
        elif args.noiseless:
            y = np.ones(h.n)
        else:
            rng = np.random.default_rng(args.seed)
            y = 1.0 + args.sigma * rng.standard_normal(h.n)
        llr = admm.awgn_llr(y, args.sigma)
    if llr.size != h.n:
        raise DataError(f"got {llr.size} channel values for a code of length {h.n}")
    if not np.all(np.isfinite(llr)):
        raise DataError("channel values must be finite")
    try:
        projector = admm.get_projector(args.algos)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sign = admm.XUpdateSign.LITERAL if args.literal_sign else admm.XUpdateSign.STANDARD_ADMM
    cfg = admm.DecoderConfig(rho=args.rho, max_iterations=args.max_iters, x_update_sign=sign)
    res = admm.decode(llr, h, cfg, projector)
    print(" ".join(str(int(b)) for b in res.hard_decision), file=out)
    print(f"status: {res.status.value}", file=out)
    print(f"iterations: {res.iterations}", file=out)


def _cmd_bench(args, out):
    algos = getattr(args, "algos", (Algorithm.FIX,))
    try:
        spec = bench.BenchSpec(algorithms=algos, degrees=args.degrees, half_range=args.half_range,
                               trials=args.trials, seed=args.seed, workers=args.workers,
                               kind=args.kind)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.command == "bench-ops":
        result = bench.run_op_bench(spec)
        text = bench.op_bench_csv(result)
        what = "ops"
    elif args.command == "bench-prob":
        result = bench.run_probability(spec)
        text = bench.probability_csv(result)
        what = "prob"
    else:
        result = bench.run_iteration_stats(spec)
        text = bench.iteration_csv(result)
        what = "iters"
    if args.csv_out:
        with open(args.csv_out, "w", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    if args.svg_out:
        bench.write_svg(result, args.svg_out, what)
    if what == "ops" and Algorithm.FIX in spec.algorithms and len(spec.algorithms) > 1:
        savings = bench.savings_vs_best_baseline(result)
        d_best = max(savings, key=savings.get)
        print(f"total-op savings vs best baseline: max {100 * savings[d_best]:.1f}% at d={d_best}, "
              f"min {100 * min(savings.values()):.1f}%", file=sys.stderr)


_COMMANDS = {"project": _cmd_project, "decode": _cmd_decode, "bench-ops": _cmd_bench,
             "bench-prob": _cmd_bench, "bench-iters": _cmd_bench}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"paritypoly: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"paritypoly: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"paritypoly: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
