"""Command-line front end over the experiment engine.

Subcommands map one-to-one to harness modes::

    solve      one sparse solve at a fixed gamma
    tradeoff   variance-vs-cardinality sweep over a gamma grid
    cardsweep  cardinality-vs-gamma sweep (grid dense near the threshold)
    bench      timing table across problem sizes
    pca        unpenalized baseline components

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

import argparse
import sys

from .errors import DataFormatError, NotConvexError, NumericalError
from .harness import ExperimentSpec, emit_results, run_experiment


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; this tool reserves 2
    # for data errors, so remap usage problems to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _gen_triple(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected p,n,seed")
    try:
        return tuple(int(v) for v in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("expected integers p,n,seed") from None


def _grid_triple(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected lo:hi:steps")
    try:
        return (float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError:
        raise argparse.ArgumentTypeError("expected lo:hi:steps with numeric bounds") from None


def _mu_list(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated weights") from None


def build_parser():
    parser = _Parser(prog="sparsepca", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in ("solve", "tradeoff", "cardsweep", "bench", "pca"):
        sp = sub.add_parser(mode)
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--input", help="delimited text matrix (rows = samples)")
        src.add_argument(
            "--gen",
            type=_gen_triple,
            action="append",
            metavar="p,n,seed",
            help="random Gaussian instance; repeatable for bench",
        )
        sp.add_argument("--penalty", choices=("l1", "l0"), default="l1")
        sp.add_argument("--gamma", type=float, default=0.0)
        sp.add_argument(
            "--gamma-grid",
            type=_grid_triple,
            metavar="lo:hi:steps",
            help="explicit linear gamma grid (sweeps only)",
        )
        sp.add_argument("--block", type=int, default=1, metavar="m")
        sp.add_argument("--mu", type=_mu_list, metavar="w1,w2,...")
        sp.add_argument("--center", action="store_true")
        sp.add_argument("--eps", type=float, default=1e-4)
        sp.add_argument("--max-iter", type=int, default=100000)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", help="output path; stdout when omitted")
        sp.add_argument("--reps", type=int, default=1)
        sp.add_argument("--delimiter", default=None, help="cell delimiter, default whitespace")
        sp.add_argument("--skip-header", action="store_true")
    return parser


def spec_from_args(args):
    return ExperimentSpec(
        mode=args.mode,
        input_path=args.input,
        gens=args.gen or [],
        penalty=args.penalty,
        gamma=args.gamma,
        gamma_grid=args.gamma_grid,
        block_m=args.block,
        mu=args.mu,
        center=args.center,
        eps=args.eps,
        max_iter=args.max_iter,
        reps=args.reps,
        out_format=args.format,
        out_path=args.out,
        delimiter=args.delimiter,
        skip_header=args.skip_header,
    )


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        spec = spec_from_args(args)
    except ValueError as exc:
        sys.stderr.write(f"sparsepca: error: {exc}\n")
        return 1
    try:
        payload = run_experiment(spec)
        text = emit_results(payload, spec.out_format, spec.out_path)
    except DataFormatError as exc:
        sys.stderr.write(f"sparsepca: data error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"sparsepca: data error: {exc}\n")
        return 2
    except (NumericalError, NotConvexError) as exc:
        sys.stderr.write(f"sparsepca: numerical failure: {exc}\n")
        return 3
    if spec.out_path is None:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
