"""Invoked as ``render <figure-id> <csv> [-o out.png]``."""

from __future__ import annotations

import argparse
import sys

from .render import FIGURE_IDS, EmptyDataError, FigureSpec, MissingColumnError, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render a figure analog from an lpncsim experiment CSV.",
    )
    parser.add_argument("figure_id", choices=FIGURE_IDS, help="figure layout")
    parser.add_argument("csv", help="input CSV produced by the lpncsim CLI")
    parser.add_argument(
        "-o", "--out", help="output image path (default: <figure-id>.png)"
    )
    args = parser.parse_args(argv)
    out = args.out or f"{args.figure_id}.png"
    try:
        path = render(FigureSpec(args.figure_id, args.csv, out))
    except (MissingColumnError, EmptyDataError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
