"""Comparisons per instance against merge sort as n grows.

Banded linear classes and near-deterministic mixtures both have small
permutation entropy, so the self-improving sorters should fall further
below merge sort as n increases.

    python scripts/entropy_adaptivity.py --count 300
"""
import argparse

from selfsort.bench import sort_rows, summarize, train_from_spec
from selfsort.generators import make_rng, near_deterministic_mixture_spec, random_linear_spec


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=300)
    ap.add_argument("--epsilon", type=float, default=0.5)
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256, 512, 1024])
    args = ap.parse_args()
    print(f"{'model':8} {'n':>5} {'mean':>9} {'/n':>6} {'merge':>9} {'ratio':>6} {'tree fb':>8}")
    for n in args.sizes:
        for kind, spec in (("linear", random_linear_spec(n, 8, seed=0, band_gap=10.0)),
                           ("mixture", near_deterministic_mixture_spec(n, 4, m=4, seed=0))):
            model = train_from_spec(spec, 1, args.epsilon)
            rows = sort_rows(model, spec.sample_batch(make_rng(2), args.count))
            s = summarize(rows, model.vlist.size + 1)
            print(f"{kind:8} {n:5d} {s['mean_total']:9.1f} {s['mean_total'] / n:6.2f} "
                  f"{s['mean_baseline']:9.1f} {s['ratio_to_baseline']:6.3f} {s['mean_tree_fallbacks']:8.1f}")


if __name__ == "__main__":
    main()
