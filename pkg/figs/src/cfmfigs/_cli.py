"""Shared command-line plumbing for the figure scripts."""

from __future__ import annotations

import argparse
import sys
from typing import Callable, Optional, Sequence

from .schema import SchemaError


def make_main(
    description: str,
    positionals: Sequence[tuple[str, str]],
    run: Callable[[argparse.Namespace], None],
) -> Callable[[Optional[Sequence[str]]], int]:
    """Build a main() with positional paths, a --png flag, and 0/1 exit codes."""

    def main(argv: Optional[Sequence[str]] = None) -> int:
        parser = argparse.ArgumentParser(description=description)
        for name, help_text in positionals:
            parser.add_argument(name, help=help_text)
        parser.add_argument("--png", action="store_true",
                            help="write raster PNG instead of SVG")
        args = parser.parse_args(argv)
        try:
            run(args)
        except (SchemaError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        return 0

    return main
