"""Script entry point: ``plotkit <recipe-file>``."""

from __future__ import annotations

import sys

from .data import PlotkitError
from .recipes import load_recipe
from .render import render


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1 or argv[0] in ("-h", "--help"):
        print("usage: plotkit <recipe-file.json>", file=sys.stderr)
        return 2
    try:
        out = render(load_recipe(argv[0]))
    except PlotkitError as e:
        print(f"plotkit: {e}", file=sys.stderr)
        return 2
    print(out)
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
