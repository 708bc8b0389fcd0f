"""Command line entry point: ``sfcqmc <subcommand> ...``.

Exit status is 0 on success, 2 on usage errors and 1 on runtime errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import analysis, harness
from .curves import MAX_LEVEL, CurveKind, GridSpec, ImageDims, index_map
from .image import ImageBuffer, csv_text, write_csv
from .radical import PRIMES, ScrambleSpec
from .sequences import HaltonSpec, halton_point
from .strategies import PRESETS, make_strategy

__all__ = ["build_parser", "run", "main"]


class UsageError(Exception):
    pass


def _curve(text):
    try:
        return CurveKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _scramble(text):
    try:
        return ScrambleSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _non_negative(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return value


def _bases(text):
    try:
        bases = [int(b) for b in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated bases, got {text!r}") from None
    if len(bases) not in (1, 3):
        raise argparse.ArgumentTypeError("give 1 base (gray) or 3 bases (RGB)")
    if any(b not in PRIMES for b in bases):
        raise argparse.ArgumentTypeError(f"bases must be primes up to {PRIMES[-1]}")
    return bases


def _halton(text):
    try:
        d, n = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected DIMS:COUNT, got {text!r}") from None
    if d not in (1, 2) or not 1 <= n <= 4096:
        raise argparse.ArgumentTypeError("DIMS must be 1 or 2 and COUNT in [1, 4096]")
    return d, n


def _strategy(text):
    name = text.split(":", 1)[1] if text.startswith("randomized:") else text
    if name not in PRESETS:
        choices = ", ".join(list(PRESETS) + ["randomized:<name>"])
        raise argparse.ArgumentTypeError(f"unknown strategy {text!r}; choose from {choices}")
    return text


def _add_grid(p):
    p.add_argument("--curve", type=_curve, required=True, help="morton, hilbert, moore or peano")
    p.add_argument("--level", type=_non_negative, required=True, help="grid side is base**level")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sfcqmc", description="Space-filling curve sample enumeration tools.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("curve-map", help="curve index of every pixel")
    _add_grid(p)
    p.add_argument("--out", help="PGM image (CSV if the name ends in .csv); CSV on stdout if omitted")

    p = sub.add_parser("segments", help="curve segments per 3x3 neighborhood")
    _add_grid(p)
    p.add_argument("--out", help="per-pixel CSV")
    p.add_argument("--map", help="PGM of the counts scaled by their maximum")

    p = sub.add_parser("diff-map", help="index differences across grid edges")
    _add_grid(p)
    p.add_argument("--out", help="edge CSV; stdout if omitted")
    p.add_argument("--skip-ones", action="store_true", help="omit edges that are curve steps")

    p = sub.add_parser("dither", help="first sample of each pixel as an image")
    _add_grid(p)
    p.add_argument("--bases", type=_bases, default=[2], help="1 or 3 comma separated prime bases")
    p.add_argument("--scramble", type=_scramble, default=ScrambleSpec(), help="none|zaremba|faure|digit:SEED|owen:SEED")
    p.add_argument("--spp", type=_positive, default=1)
    p.add_argument("--out", required=True, help="PGM (1 base) or PPM (3 bases)")
    p.add_argument("--csv", help="also write per-pixel values as CSV")

    p = sub.add_parser("render", help="render an analytic integrand and report errors")
    p.add_argument("--strategy", type=_strategy, required=True)
    p.add_argument("--integrand", choices=list(harness.INTEGRANDS), required=True)
    p.add_argument("--width", type=_positive, required=True)
    p.add_argument("--height", type=_positive, required=True)
    p.add_argument("--spp", type=_positive, required=True)
    p.add_argument("--seed", type=_non_negative, default=0, help="seed of randomized strategies")
    p.add_argument("--curve", type=_curve, default=None)
    p.add_argument("--scramble", type=_scramble, default=None, help="scrambling of the Halton sequence")
    p.add_argument("--n-dims", type=_positive, default=4)
    p.add_argument("--samples-per-pass", type=_positive, default=1)
    p.add_argument("--out", help="PGM of the rendered image")
    p.add_argument("--reference-out", help="PGM of the exact image")
    p.add_argument("--csv", help="error report CSV; stdout if omitted")

    p = sub.add_parser("discrepancy", help="exact star discrepancy of a point set")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--points", help="text file with 1 or 2 numbers per line")
    g.add_argument("--halton", type=_halton, metavar="DIMS:COUNT")
    p.add_argument("--scramble", type=_scramble, default=ScrambleSpec(), help="scrambling for --halton")
    p.add_argument("--out", help="CSV result; stdout if omitted")
    return parser


def _grid(args) -> GridSpec:
    cap = MAX_LEVEL[args.curve.base]
    if args.level > cap:
        raise UsageError(f"--level {args.level} exceeds the {args.curve.value} limit of {cap}")
    return GridSpec(args.curve, args.level)


def _emit(text: str, path, stdout):
    if path:
        Path(path).write_text(text)
    else:
        stdout.write(text)


def _cmd_curve_map(args, stdout):
    grid = _grid(args)
    idx = index_map(grid)
    if args.out and not args.out.endswith(".csv"):
        ImageBuffer(idx / max(grid.length - 1, 1)).write_pnm(args.out)
        return
    text = csv_text(["pixel_x", "pixel_y", "index"], analysis.pixel_rows(idx))
    _emit(text, args.out, stdout)


def _cmd_segments(args, stdout):
    grid = _grid(args)
    stats = analysis.segment_stats(grid)
    if args.out:
        write_csv(args.out, ["pixel_x", "pixel_y", "segments"], analysis.pixel_rows(stats.counts))
    if args.map:
        ImageBuffer(stats.counts / stats.max).write_pnm(args.map)
    histogram = " ".join(f"{k}:{v}" for k, v in sorted(stats.histogram.items()))
    row = [args.curve.value, args.level, stats.max, repr(float(stats.counts.mean())), histogram]
    stdout.write(csv_text(["curve", "level", "max", "mean", "histogram"], [row]))


def _cmd_diff_map(args, stdout):
    grid = _grid(args)
    rows = analysis.diff_map(grid).rows(skip_ones=args.skip_ones)
    _emit(csv_text(["x0", "y0", "x1", "y1", "diff"], rows), args.out, stdout)


def _cmd_dither(args, stdout):
    grid = _grid(args)
    dims = ImageDims(grid.side, grid.side)
    image = analysis.dither_map(grid, dims, [(b, args.scramble) for b in args.bases], args.spp)
    image.write_pnm(args.out)
    if args.csv:
        image.write_csv(args.csv, "value")


def _cmd_render(args, stdout):
    dims = ImageDims(args.width, args.height)
    params = dict(
        curve=args.curve.value if args.curve else None,
        scramble=args.scramble,
        n_dims=args.n_dims,
        samples_per_pass=args.samples_per_pass,
    )
    strategy = make_strategy(args.strategy, seed=args.seed, **params)
    image = harness.render(strategy, args.integrand, dims, args.spp)
    ref = harness.reference(args.integrand, dims)
    report = harness.compare(image, ref)
    if args.out:
        image.write_pnm(args.out)
    if args.reference_out:
        ref.write_pnm(args.reference_out)
    rows = [harness.report_row(args.strategy, args.integrand, args.spp, report)]
    _emit(harness.report_text(rows), args.csv, stdout)


def _read_points(path):
    text = Path(path).read_text().replace(",", " ")
    return np.loadtxt(text.splitlines(), ndmin=2)


def _cmd_discrepancy(args, stdout):
    if args.points:
        pts = _read_points(args.points)
        label = args.points
    else:
        d, n = args.halton
        pts = halton_point(HaltonSpec(d, args.scramble), np.arange(n)).reshape(n, d)
        label = f"halton:{d}:{n}"
    if pts.ndim != 2 or pts.shape[1] not in (1, 2):
        raise ValueError("points must have 1 or 2 coordinates per line")
    if pts.shape[1] == 1:
        value = analysis.star_discrepancy_1d(pts[:, 0])
    else:
        value = analysis.star_discrepancy_2d(pts)
    rows = [[label, pts.shape[0], pts.shape[1], repr(value)]]
    _emit(csv_text(["source", "points", "dimensions", "star_discrepancy"], rows), args.out, stdout)


_COMMANDS = {
    "curve-map": _cmd_curve_map,
    "segments": _cmd_segments,
    "diff-map": _cmd_diff_map,
    "dither": _cmd_dither,
    "render": _cmd_render,
    "discrepancy": _cmd_discrepancy,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    """Run one subcommand and return its exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _COMMANDS[args.command](args, stdout)
    except UsageError as exc:
        parser.print_usage(stderr)
        stderr.write(f"sfcqmc: error: {exc}\n")
        return 2
    except (ValueError, OSError) as exc:
        stderr.write(f"sfcqmc: {exc}\n")
        return 1
    return 0


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
