"""``selfsort`` command-line interface.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bench import (BenchReport, RunConfig, Sorter, read_report, replay_matches, run_bench, sort_rows, summarize,
                    write_report)
from .errors import DimensionMismatch, SelfSortError, SpecError
from .generators import LinearClassSpec, instance_stream, load_spec, make_rng
from .linear_sorter import LinearSorterModel, train_linear
from .mixture_sorter import MixtureSorterModel, train_mixture
from .modelio import load_model, save_model
from .streams import read_stream, write_permutations, write_stream


def _training_stream(cfg: RunConfig):
    if cfg.input:
        return iter(read_stream(cfg.input)), None
    if cfg.spec:
        spec = load_spec(cfg.spec)
        return instance_stream(spec, cfg.seed), spec
    raise SpecError("in", "training needs --in or --spec")


def cmd_gen(cfg: RunConfig) -> int:
    if not cfg.spec or not cfg.out:
        raise SpecError("spec", "gen needs --spec and --out")
    spec = load_spec(cfg.spec)
    rows = spec.sample_batch(make_rng(cfg.seed), cfg.count)
    write_stream(cfg.out, rows, binary=cfg.format == "binary")
    print(f"wrote {cfg.count} instances of n={spec.n} to {cfg.out}")
    return 0


def cmd_train(cfg: RunConfig, kind: str) -> int:
    out = cfg.out or cfg.model
    if not out:
        raise SpecError("out", "training needs --out")
    stream, spec = _training_stream(cfg)
    if kind == "linear":
        model = train_linear(stream, cfg.epsilon)
    else:
        m = cfg.m or (spec.m if spec is not None and hasattr(spec, "m") else 1)
        model = train_mixture(stream, m=m, epsilon=cfg.epsilon)
    save_model(model, out)
    print(f"trained {kind} model n={model.n} -> {out}")
    return 0


def _load_inputs(cfg: RunConfig):
    if not cfg.model or not cfg.input:
        raise SpecError("model", "needs --model and --in")
    model = load_model(cfg.model)
    instances = read_stream(cfg.input)
    if instances.shape[1] != model.n:
        raise DimensionMismatch(f"stream has n={instances.shape[1]}, model has n={model.n}")
    return model, instances


def cmd_sort(cfg: RunConfig, report_path: str | None) -> int:
    model, instances = _load_inputs(cfg)
    sorter = Sorter(model)
    perms = [sorter(row.tolist()).order for row in instances]
    if cfg.out:
        write_permutations(cfg.out, perms)
    else:
        for p in perms:
            print(" ".join(str(i + 1) for i in p))
    if report_path:
        rows = sort_rows(model, instances, cfg.jobs)
        write_report(BenchReport(cfg, rows, summarize(rows, model.vlist.size + 1)), report_path,
                     cfg.format if cfg.format in ("csv", "jsonl") else "jsonl")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    model, instances = _load_inputs(cfg)
    rows = sort_rows(model, instances, cfg.jobs)
    good = sum(r["sorted_ok"] for r in rows)
    print(f"sorted: {good}/{len(rows)}")
    status = 0 if good == len(rows) else 1
    if cfg.spec and isinstance(model, LinearSorterModel):
        spec = load_spec(cfg.spec)
        if isinstance(spec, LinearClassSpec):
            same = (model.partition.class_sets() == spec.partition()
                    and set(model.partition.degenerates) == set(spec.degenerates))
            print(f"partition: {'match' if same else 'mismatch'}")
            if not same:
                status = 1
    return status


def _inspect(model) -> dict:
    if isinstance(model, MixtureSorterModel):
        sizes = model.bucket_sizes()
        depths = [t.expected_depth() for t in model.trees]
        return {
            "kind": "mixture", "n": model.n, "m": model.m, "epsilon": model.epsilon,
            "intervals": model.num_intervals, "buckets": len(sizes), "bucket_sizes": sizes,
            "tree_keys_mean": float(np.mean([len(t) for t in model.trees])),
            "tree_expected_depth_mean": float(np.mean(depths)),
            "depth_cutoff": model.trees[0].depth_cutoff if model.trees else 0,
        }
    return {
        "kind": "linear", "n": model.n, "epsilon": model.epsilon,
        "intervals": model.vlist.size + 1,
        "classes": len(model.partition.classes),
        "class_sizes": [len(c) for c in model.partition.classes],
        "degenerates": len(model.partition.degenerates),
        "marked_intervals": len(model.marks),
        "slab_counts": [si.num_slabs for si in model.slabs],
        "tree_expected_depths": [t.expected_depth() for t in model.trees],
        "depth_cutoff": model.trees[0].depth_cutoff if model.trees else 0,
    }


def cmd_inspect(cfg: RunConfig) -> int:
    if not cfg.model:
        raise SpecError("model", "inspect needs --model")
    print(json.dumps(_inspect(load_model(cfg.model)), indent=1))
    return 0


def cmd_bench(cfg: RunConfig, replay: str | None) -> int:
    if replay:
        old = read_report(replay)
        same = replay_matches(old)
        print(f"replay: {'identical' if same else 'DIFFERENT'} comparison counts over {len(old.rows)} instances")
        return 0 if same else 1
    report = run_bench(cfg)
    if cfg.out:
        write_report(report, cfg.out, cfg.format if cfg.format in ("csv", "jsonl") else "jsonl")
    print(json.dumps(report.summary, indent=1))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="selfsort", description="Self-improving sorters")
    p.add_argument("command", choices=["gen", "train-linear", "train-mixture", "sort", "verify", "bench", "inspect"])
    p.add_argument("--spec")
    p.add_argument("--model")
    p.add_argument("--in", dest="input")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--m", type=int)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--format", default=None,
                   help="csv|jsonl for reports, text|binary for gen")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report", help="sort: also write a per-instance report here")
    p.add_argument("--replay", help="bench: re-run the config embedded in this report")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.format or ("text" if args.command == "gen" else "jsonl")
    cfg = RunConfig(command=args.command, spec=args.spec, model=args.model, input=args.input, out=args.out,
                    seed=args.seed, epsilon=args.epsilon, m=args.m, count=args.count, format=fmt, jobs=args.jobs)
    try:
        cfg.validate()
        if args.command == "gen":
            return cmd_gen(cfg)
        if args.command == "train-linear":
            return cmd_train(cfg, "linear")
        if args.command == "train-mixture":
            return cmd_train(cfg, "mixture")
        if args.command == "sort":
            return cmd_sort(cfg, args.report)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "bench":
            return cmd_bench(cfg, args.replay)
        return cmd_inspect(cfg)
    except (SelfSortError, OSError, ValueError) as exc:
        print(f"selfsort: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
