#!/usr/bin/env python3
"""Emit a seeded random knowledge base as DSL text on stdout.

Handy for fuzzing downstream tooling or eyeballing what the generator
produces:

    python3 scripts/gen_random_kb.py --seed 7 --diseases 4 | smartdoc validate /dev/stdin
"""

import argparse
import sys

from smartdoc.dsl import serialize_kb
from smartdoc.generate import random_kb


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--diseases", type=int, default=3)
    parser.add_argument("--min-depth", type=int, default=1)
    parser.add_argument("--max-depth", type=int, default=7)
    parser.add_argument("--branching", type=int, nargs=2, default=(2, 4), metavar=("LO", "HI"))
    parser.add_argument(
        "--naughty", action="store_true", help="salt strings with quotes, hashes, newlines"
    )
    args = parser.parse_args()
    kb = random_kb(
        args.seed,
        diseases=(args.diseases, args.diseases),
        branching=tuple(args.branching),
        depth=(args.min_depth, args.max_depth),
        naughty=args.naughty,
    )
    sys.stdout.write(serialize_kb(kb))
    return 0


if __name__ == "__main__":
    sys.exit(main())
