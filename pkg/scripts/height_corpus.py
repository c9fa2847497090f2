"""Heights and verdicts over a seeded random corpus.

    python3 scripts/height_corpus.py --count 200 --seed 1
"""

import argparse
import collections
import math
import time

from tallplateau.corpus import KINDS, corpus
from tallplateau.curves import classify, has_thin_tail, height


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=KINDS)
    args = p.parse_args()
    t0 = time.perf_counter()
    fams = corpus(args.count, args.seed, args.kind)
    counts = collections.Counter()
    tails = 0
    finite = []
    for f in fams:
        v = classify(f)
        counts[v.kind] += 1
        if v.kind == "Short" and has_thin_tail(f) is not None:
            tails += 1
        h = height(f).h
        if math.isfinite(h):
            finite.append(h)
    dt = time.perf_counter() - t0
    print(f"{len(fams)} curves in {dt:.2f}s: " + ", ".join(f"{k} {n}" for k, n in sorted(counts.items())))
    print(f"short curves with a thin tail: {tails}")
    if finite:
        print(f"finite heights: {len(finite)}, min {min(finite):.4f}, max {max(finite):.4f}")


if __name__ == "__main__":
    main()
