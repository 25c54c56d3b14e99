"""Command-line entry point: bhqrc-plots {render,all}."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .discover import render_all
from .render import load_spec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bhqrc-plots",
        description="Render figures from benchmark result tables")
    commands = parser.add_subparsers(dest="command", required=True)
    one = commands.add_parser("render", help="render a single plot spec")
    one.add_argument("spec", type=Path, help="JSON plot specification")
    batch = commands.add_parser("all", help="render everything in a results dir")
    batch.add_argument("directory", type=Path)
    batch.add_argument("--out", type=Path, default=None,
                       help="image output directory (default <dir>/figures)")
    args = parser.parse_args(argv)

    if args.command == "render":
        out = render(load_spec(args.spec))
        print(out)
        return 0
    images, warnings = render_all(args.directory, args.out)
    for image in images:
        print(image)
    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
