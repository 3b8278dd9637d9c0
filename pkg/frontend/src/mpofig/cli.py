"""Command-line entry point: ``mpofig render --recipe PATH --out FILE``."""

from __future__ import annotations

import argparse
import sys

from .errors import MpofigError
from .figures import render
from .recipes import load_recipe


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpofig",
        description="Regenerate figures from mpodyn CSV run artifacts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    render_p = sub.add_parser("render", help="render one figure recipe")
    render_p.add_argument(
        "--recipe", required=True, help="path to the recipe JSON file"
    )
    render_p.add_argument(
        "--out", required=True, help="output image path (.png, .svg, or .pdf)"
    )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        recipe = load_recipe(args.recipe)
        out = render(recipe, args.out)
    except MpofigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 10
    except Exception as exc:  # pragma: no cover - defensive
        print(f"unexpected error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
