"""Write the benchmark spec files used in the README examples.

    python scripts/make_specs.py --out specs/
"""
import argparse
from pathlib import Path

from selfsort.generators import (near_deterministic_mixture_spec, random_linear_spec, random_mixture_spec,
                                 save_spec)

PRESETS = {
    "banded_linear_1024": lambda: random_linear_spec(1024, 8, seed=0, band_gap=10.0),
    "linear_50": lambda: random_linear_spec(50, 5, n_degenerate=5, seed=0),
    "bands_mixture_1024": lambda: near_deterministic_mixture_spec(1024, 4, m=4, seed=0),
    "random_mixture_64": lambda: random_mixture_spec(64, 2, m=4, seed=0),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="specs")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, make in PRESETS.items():
        save_spec(make(), out / f"{name}.json")
        print(out / f"{name}.json")


if __name__ == "__main__":
    main()
