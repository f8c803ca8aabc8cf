"""How the frequency-tree depth cutoff drives mixture-sorter cost.

Retrains once, then rebuilds the per-index trees with different cutoffs
from the same recorded weights and re-sorts the same instances.

    python scripts/cutoff_ablation.py --n 1024 --count 300
"""
import argparse

from selfsort.bench import sort_rows, summarize, train_from_spec
from selfsort.freq_bst import depth_cutoff
from selfsort.generators import make_rng, near_deterministic_mixture_spec
from selfsort.mixture_sorter import _interval_tree


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1024)
    ap.add_argument("--m", type=int, default=4)
    ap.add_argument("--count", type=int, default=300)
    ap.add_argument("--epsilon", type=float, default=0.5)
    args = ap.parse_args()
    spec = near_deterministic_mixture_spec(args.n, args.m, m=args.m, seed=0)
    model = train_from_spec(spec, 1, args.epsilon)
    inst = spec.sample_batch(make_rng(2), args.count)
    default = depth_cutoff(args.epsilon, args.m * args.n)
    keys = sum(len(t) for t in model.trees) / args.n
    print(f"n={args.n} m={args.m} eps={args.epsilon}: default cutoff {default}, {keys:.1f} keys per tree")
    for cut in sorted({default, default + 1, default + 2, 64}):
        model.trees = [_interval_tree(model.vlist, pairs, cut) for pairs in model.weights]
        s = summarize(sort_rows(model, inst), model.num_intervals)
        print(f"cutoff {cut:2d}: {s['mean_total'] / args.n:5.2f} comparisons/n, "
              f"{s['mean_tree_fallbacks']:7.1f} tree fallbacks per instance")


if __name__ == "__main__":
    main()
