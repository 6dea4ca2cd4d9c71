#!/usr/bin/env python3
"""Write the principle implication graph as DOT (stdout or a file)."""

import argparse
import sys

from fcalc.graph import build, check_equivalence, export_dot


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=None, help="output path (default stdout)")
    args = ap.parse_args()
    g = build()
    dot = export_dot(g)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dot)
        print(f"wrote {len(g.nodes)} nodes / {len(g.edges)} edges to {args.out}",
              file=sys.stderr)
    else:
        sys.stdout.write(dot)
    return 0 if check_equivalence(g) else 1


if __name__ == "__main__":
    sys.exit(main())
