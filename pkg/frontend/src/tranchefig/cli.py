"""Command line: `tranchefig <layout> inputs... --out figure.svg`."""

from __future__ import annotations

import argparse
import sys

from .render import LAYOUTS, SchemaError, render


def main(argv=None) -> int:
    p = argparse.ArgumentParser(
        prog="tranchefig",
        description="Render tranchelab CSV/JSON exports as figures.",
    )
    p.add_argument("layout", choices=sorted(LAYOUTS))
    p.add_argument("inputs", nargs="+", help="export files in layout order")
    p.add_argument("--out", required=True, help="output image (.svg or .png)")
    p.add_argument("--style", help="style JSON (default: built-in)")
    args = p.parse_args(argv)
    try:
        out = render(args.layout, args.inputs, args.out, args.style)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
