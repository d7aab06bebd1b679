"""Standalone figure scripts: ``plotkit <panel> --in ... --out ...``.

Exit codes: 0 success, 2 bad arguments or unreadable/ill-formed input.
"""

from __future__ import annotations

import argparse
import sys

from .io import MissingColumnError
from .panels import (
    render_compare,
    render_distance,
    render_protocols,
    render_sweep,
    render_trace,
)

_SINGLE_INPUT = {
    "trace": render_trace,
    "sweep": render_sweep,
    "compare": render_compare,
    "distance": render_distance,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render figure panels from quenchecho CSV files.")
    sub = parser.add_subparsers(dest="panel", required=True)
    for name, fn in _SINGLE_INPUT.items():
        p = sub.add_parser(name, help=fn.__doc__.splitlines()[0])
        p.add_argument("--in", dest="inputs", action="append", required=True,
                       metavar="CSV", help="input CSV (exactly one)")
        p.add_argument("--out", required=True, help="output image path")
    p = sub.add_parser("protocols",
                       help=render_protocols.__doc__.splitlines()[0])
    p.add_argument("--in", dest="inputs", action="append", required=True,
                   metavar="CSV", help="input trace CSV (repeatable)")
    p.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.panel == "protocols":
            render_protocols(args.inputs, args.out)
        else:
            if len(args.inputs) != 1:
                raise ValueError(
                    f"panel {args.panel!r} takes exactly one --in, "
                    f"got {len(args.inputs)}")
            _SINGLE_INPUT[args.panel](args.inputs[0], args.out)
    except (MissingColumnError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"{args.panel}: wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
