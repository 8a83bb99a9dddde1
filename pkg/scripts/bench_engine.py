#!/usr/bin/env python3
"""Measure replay throughput over seeded random knowledge bases.

Enumerates every root-to-leaf label path of each generated KB and replays it
through the dialogue engine, reporting paths per second. Use it to spot
regressions after engine or matcher changes:

    python3 scripts/bench_engine.py --kbs 100 --repeat 3
"""

import argparse
import sys
import time

from smartdoc.engine import replay
from smartdoc.generate import random_kb
from smartdoc.matching import build_index


def leaf_paths(disease, cursor=None, prefix=()):
    cursor = cursor if cursor is not None else disease.entries[0].root
    if disease.is_leaf(cursor):
        yield prefix
        return
    for edge in disease.nodes[cursor].answers:
        yield from leaf_paths(disease, edge.target, prefix + (edge.label,))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--kbs", type=int, default=100)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    work = []
    for seed in range(args.kbs):
        kb = random_kb(seed)
        index = build_index(kb)
        for disease in kb.diseases:
            for labels in leaf_paths(disease):
                work.append((kb, index, disease.entries[0].complaint, list(labels)))

    print(f"{args.kbs} KBs, {len(work)} distinct paths")
    best = float("inf")
    for run in range(1, args.repeat + 1):
        t0 = time.perf_counter()
        for kb, index, complaint, labels in work:
            replay(kb, complaint, labels, index=index)
        elapsed = time.perf_counter() - t0
        best = min(best, elapsed)
        print(f"  run {run}: {elapsed:.3f}s ({len(work) / elapsed:,.0f} paths/s)")
    print(f"best: {best:.3f}s ({len(work) / best:,.0f} paths/s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
