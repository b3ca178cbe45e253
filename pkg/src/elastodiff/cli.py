"""Command line front end for convergence studies and single runs."""

from __future__ import annotations

import argparse
import sys

from .manufactured import case_labels
from .metrics import KINDS
from .scheme import INITIALIZERS
from .study import (
    DEFAULT_N,
    DEFAULT_N_FINE,
    FORMATS,
    PRESETS,
    StudySpec,
    run_single,
    run_study,
)

__all__ = ["main", "build_parser"]


def _n_list(text: str):
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma separated integers, got {text!r}"
        ) from None
    if not values:
        raise argparse.ArgumentTypeError("expected at least one mesh count")
    return values


def _format_list(text: str):
    values = tuple(part.strip() for part in text.split(",") if part.strip())
    unknown = set(values) - set(FORMATS)
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown formats {sorted(unknown)}; choose from {', '.join(FORMATS)}"
        )
    return values


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--case",
        default="A",
        choices=case_labels(),
        help="manufactured solution to run (default: A)",
    )
    parser.add_argument(
        "--preset",
        choices=sorted(PRESETS),
        help="named penalty law mu(h) = C h^r; overrides --cmu/--r",
    )
    parser.add_argument("--cmu", type=float, help="penalty constant C")
    parser.add_argument("--r", type=float, help="penalty exponent r")
    parser.add_argument("--T", type=float, default=1.0, help="final time (default: 1)")
    parser.add_argument(
        "--delta",
        type=float,
        default=None,
        help="time step; defaults to h^2 rounded so T is a whole number of steps",
    )
    parser.add_argument(
        "--initializer",
        default="ritz",
        choices=INITIALIZERS,
        help="how the discrete initial pair (u0, w0) is built (default: ritz)",
    )
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument(
        "--format",
        type=_format_list,
        default=FORMATS,
        help="comma separated outputs: csv,json,gnuplot (default: all)",
    )


def _resolve_penalty(args, parser: argparse.ArgumentParser):
    if args.preset is not None:
        if args.cmu is not None or args.r is not None:
            parser.error("--preset replaces --cmu/--r; give one or the other")
        return PRESETS[args.preset]
    if args.cmu is None or args.r is None:
        parser.error("need either --preset or both --cmu and --r")
    return args.cmu, args.r


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elastodiff",
        description=(
            "Finite element solver for elastic flow of a clamped graph curve "
            "coupled to lateral diffusion, with manufactured-solution "
            "convergence studies."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    study = sub.add_parser(
        "study", help="convergence study over a sequence of meshes"
    )
    _add_common(study)
    study.add_argument(
        "--N",
        type=_n_list,
        default=None,
        help="comma separated mesh counts (default: 61,...,201; case B adds 251,301)",
    )
    study.add_argument(
        "--jobs", type=int, default=1, help="worker processes (default: 1)"
    )

    single = sub.add_parser("single", help="one run with trajectory output")
    _add_common(single)
    single.add_argument("--N", type=int, default=61, help="mesh count (default: 61)")

    return parser


def _study_progress(n, seconds, error):
    status = "failed: " + error if error else f"done in {seconds:.1f}s"
    print(f"N={n}: {status}", file=sys.stderr, flush=True)


def _run_progress(m, steps):
    print(f"step {m}/{steps}", file=sys.stderr, flush=True)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    c_mu, r = _resolve_penalty(args, parser)

    if args.command == "study":
        n_values = args.N
        if n_values is None:
            n_values = DEFAULT_N_FINE if args.case == "B" else DEFAULT_N
        spec = StudySpec(
            case=args.case,
            c_mu=c_mu,
            r=r,
            n_values=n_values,
            T=args.T,
            delta=args.delta,
            initializer=args.initializer,
            formats=args.format,
            jobs=args.jobs,
        )
        result = run_study(spec, out_dir=args.out, progress=_study_progress)
        for path in result.files:
            print(path)
        print(
            f"case {spec.case}: {len(result.reports)} meshes, "
            f"{len(result.failures)} failures",
            file=sys.stderr,
        )
        if result.failures:
            for n, message in sorted(result.failures.items()):
                print(f"N={n} failed: {message}", file=sys.stderr)
            return 1
        return 0

    result = run_single(
        args.case,
        args.N,
        c_mu,
        r,
        T=args.T,
        delta=args.delta,
        initializer=args.initializer,
        out_dir=args.out,
        formats=args.format,
        progress=_run_progress,
    )
    if result.errors is not None:
        for kind in KINDS:
            print(f"{kind}: {result.errors[kind]:.6e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
