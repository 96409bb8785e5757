"""Standalone figure script: CSV paths in, PNG + SVG out.

Usage:

    incentive-plots regret out/table1_n5.csv out/table1_n10.csv --out figs/
    incentive-plots l1 out/*.csv --out figs/ --stem l1_distance
"""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec, MissingColumnError, plot_l1, plot_regret


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="incentive-plots",
        description="Render experiment CSVs into regret and l1-convergence figures.",
    )
    parser.add_argument("kind", choices=["regret", "l1"], help="which figure family to draw")
    parser.add_argument("csv", nargs="+", help="input CSV files from the simulation harness")
    parser.add_argument("--out", default="figures", help="output directory (default: figures/)")
    parser.add_argument("--stem", default=None, help="output file stem (default: the figure kind)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(csv_paths=tuple(args.csv), kind=args.kind, out_dir=args.out, stem=args.stem)
    try:
        written = plot_regret(spec) if args.kind == "regret" else plot_l1(spec)
    except MissingColumnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
