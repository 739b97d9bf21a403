"""Command-line surface: fit a generator, sample data, evaluate similarity.

Exit codes: 0 success, 2 usage or schema problems, 3 generator build
failures, 4 sampling failures. Every command is deterministic under
``--seed``; omitting the seed derives one from the clock and echoes it,
except when the ``CI`` environment variable is set, where a seed is
mandatory.
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import clustering, generator, sampler, stats
from .classeval import cross_performance
from .dataset import load_csv, load_schema, write_csv
from .errors import (
    AllKernelsPruned,
    KernelsmithError,
    MissingClassValue,
    ParseError,
    RejectionExhausted,
    SchemaMismatch,
)
from .report import QualityReport, report_row

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUILD = 3
EXIT_SAMPLING = 4

_USAGE_ERRORS = (SchemaMismatch, ParseError, MissingClassValue, ValueError)


def _resolve_seed(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.seed is not None:
        return args.seed
    if os.environ.get("CI"):
        parser.error("--seed is required when CI is set")
    seed = time.time_ns() % 2**31
    print(f"seed: {seed} (derived from clock; pass --seed to reproduce)")
    return seed


def _add_seed(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="RNG seed (nonnegative)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kernelsmith",
        description="Kernel-based semi-artificial data generation and evaluation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit a generator from a CSV dataset")
    fit.add_argument("csv", type=Path)
    fit.add_argument("--schema", type=Path, required=True, help="schema JSON sidecar")
    fit.add_argument("--min-w", type=int, default=1)
    fit.add_argument(
        "--nominal-binary",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="one-hot encode non-binary nominal attributes",
    )
    fit.add_argument("--theta-plus", type=float, default=0.4)
    fit.add_argument("--theta-minus", type=float, default=0.2)
    fit.add_argument("--out", type=Path, default=Path("generator.json"))
    _add_seed(fit)

    gen = sub.add_parser("gen", help="sample new rows from a generator file")
    gen.add_argument("generator", type=Path)
    gen.add_argument("--size", type=int, required=True)
    gen.add_argument(
        "--class-dist",
        type=str,
        default=None,
        help='desired class proportions, e.g. "0.3,0.3,0.4" (default: empirical)',
    )
    gen.add_argument("--var", choices=["estimated", "silverman"], default="estimated")
    gen.add_argument("--default-spread", type=float, default=0.05)
    gen.add_argument("--out", type=Path, default=Path("generated.csv"))
    _add_seed(gen)

    ev = sub.add_parser("eval", help="compare an original and a generated CSV")
    ev.add_argument("original", type=Path)
    ev.add_argument("generated", type=Path)
    ev.add_argument("--schema", type=Path, required=True)
    ev.add_argument("--generator", type=Path, default=None,
                    help="generator JSON; source of the G and t columns")
    ev.add_argument("--repeats-ari", type=int, default=10)
    ev.add_argument("--repeats-cv", type=int, default=5)
    ev.add_argument("--out", type=Path, default=Path("report.json"))
    _add_seed(ev)
    return parser


def cmd_fit(args: argparse.Namespace, seed: int) -> int:
    schema = load_schema(args.schema)
    data = load_csv(args.csv, schema)
    spec = generator.build(
        data,
        min_w=args.min_w,
        nominal_as_binary=args.nominal_binary,
        theta_plus=args.theta_plus,
        theta_minus=args.theta_minus,
        seed=seed,
    )
    generator.save(spec, args.out)
    print(f"G={spec.kernel_count} t={spec.meta.build_seconds:.1f}s -> {args.out}")
    return EXIT_OK


def cmd_gen(args: argparse.Namespace, seed: int) -> int:
    spec = generator.load(args.generator)
    dist = None
    if args.class_dist is not None:
        dist = [float(v) for v in args.class_dist.split(",")]
    cfg = sampler.SamplingConfig(
        size=args.size,
        class_distribution=dist,
        var=args.var,
        default_spread=args.default_spread,
        seed=seed,
    )
    data = sampler.generate(spec, cfg)
    write_csv(data, args.out)
    print(f"wrote {data.n} rows -> {args.out}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace, seed: int) -> int:
    schema = load_schema(args.schema)
    original = load_csv(args.original, schema)
    generated = load_csv(args.generated, schema)
    kernel_count = None
    build_seconds = None
    if args.generator is not None:
        spec = generator.load(args.generator)
        kernel_count = spec.kernel_count
        build_seconds = spec.meta.build_seconds
    summary = stats.compare(original, generated)
    ari = clustering.cross_compare(
        original, generated, repeats=args.repeats_ari, seed=seed
    )
    classes = cross_performance(
        original, generated, repeats=args.repeats_cv, seed=seed
    )
    report = QualityReport(
        dataset=original.name,
        kernel_count=kernel_count,
        build_seconds=build_seconds,
        equal_fraction=sampler.equal_fraction(original, generated),
        stats=summary,
        ari=ari,
        classes=classes,
        parameters={
            "original": str(args.original),
            "generated": str(args.generated),
            "repeats_ari": args.repeats_ari,
            "repeats_cv": args.repeats_cv,
            "seed": seed,
        },
    )
    Path(args.out).write_text(report.to_json(), encoding="utf-8")
    print(report_row(report))
    print(f"report -> {args.out}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    seed = _resolve_seed(args, parser)
    handlers = {"fit": cmd_fit, "gen": cmd_gen, "eval": cmd_eval}
    try:
        return handlers[args.command](args, seed)
    except RejectionExhausted as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_SAMPLING
    except _USAGE_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except AllKernelsPruned as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BUILD
    except KernelsmithError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BUILD


if __name__ == "__main__":
    sys.exit(main())
