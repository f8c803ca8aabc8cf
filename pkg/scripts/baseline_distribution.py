"""Merge-sort comparison counts on uniformly random permutations.

    python scripts/baseline_distribution.py --n 1024 --runs 500
"""
import argparse
import math
import random

from selfsort.core import ComparisonCounter, merge_sort_counted


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1024)
    ap.add_argument("--runs", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rnd = random.Random(args.seed)
    counts = []
    for _ in range(args.runs):
        vals = list(range(args.n))
        rnd.shuffle(vals)
        c = ComparisonCounter()
        merge_sort_counted(range(args.n), vals, c)
        counts.append(c.count)
    n = args.n
    print(f"n={n}: mean {sum(counts) / len(counts):.1f}, min {min(counts)}, max {max(counts)}")
    print(f"worst case n*log2(n) - n + 1 = {n * math.ceil(math.log2(n)) - 2 ** math.ceil(math.log2(n)) + 1}")
    print(f"information bound log2(n!) = {math.lgamma(n + 1) / math.log(2):.1f}")


if __name__ == "__main__":
    main()
