"""Command-line figure renderer.

    plotkit plot --kind surface|slice|timeseries|coefficients|convergence \
                 --in FILE [FILE ...] --out IMAGE [--slice-y V] [--overlay-exact]
"""

from __future__ import annotations

import argparse
import sys

from .figures import KINDS, FigureSpec, render
from .io import ParseError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plotkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("plot", help="render one figure from solver output files")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--in", dest="inputs", required=True, nargs="+", help="input data files")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--slice-y", type=float, default=0.0, help="requested y for slice plots")
    p.add_argument("--overlay-exact", action="store_true", help="overlay the exact breather (dotted)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        spec = FigureSpec(
            kind=args.kind,
            inputs=tuple(args.inputs),
            slice_y=args.slice_y,
            overlay_exact=args.overlay_exact,
        )
        out = render(spec, args.out)
        print(f"wrote {out}")
    except FileNotFoundError as exc:
        print(f"missing input file: {exc}", file=sys.stderr)
        return 2
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
