"""Run configurations, per-instance sort reports and the benchmark driver."""
from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from .core import ComparisonCounter, merge_sort_counted
from .errors import DimensionMismatch, SpecError
from .generators import (LinearClassSpec, estimate_perm_entropy, instance_stream, load_spec, make_rng)
from .linear_sorter import sort_linear, train_linear
from .mixture_sorter import MixtureSorterModel, OperationScratch, sort_mixture, train_mixture
from .modelio import load_model
from .streams import read_stream

INSTANCE_FIELDS = (
    "instance", "n", "total", "lookup", "merge", "verify", "fallback_sort", "tree_fallbacks",
    "correctness_fallback", "baseline", "groups", "max_group", "occupancy_cost", "sorted_ok", "wall_time",
)


@dataclass
class RunConfig:
    command: str = "bench"
    spec: str | None = None
    model: str | None = None
    input: str | None = None
    out: str | None = None
    seed: int = 0
    epsilon: float = 0.5
    m: int | None = None
    count: int = 100
    format: str = "jsonl"
    jobs: int = 1

    def validate(self):
        if not 0 < self.epsilon < 1:
            raise SpecError("epsilon", "must lie in (0, 1)")
        if self.m is not None and self.m < 1:
            raise SpecError("m", "must be >= 1")
        if self.format not in ("csv", "jsonl", "text", "binary"):
            raise SpecError("format", f"unknown format {self.format!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})


class Sorter:
    """Uniform call surface over both models; owns the mixture scratch."""

    def __init__(self, model):
        self.model = model
        self.scratch = OperationScratch(model) if isinstance(model, MixtureSorterModel) else None

    def __call__(self, instance, counter: ComparisonCounter | None = None):
        if self.scratch is None:
            return sort_linear(self.model, instance, counter)
        return sort_mixture(self.model, self.scratch, instance, counter)


def train_from_spec(spec, seed: int, epsilon: float, m: int | None = None):
    stream = instance_stream(spec, seed)
    if isinstance(spec, LinearClassSpec):
        return train_linear(stream, epsilon, n=spec.n)
    return train_mixture(stream, n=spec.n, m=m or getattr(spec, "m", 1), epsilon=epsilon)


def occupancy_cost(occupancy: dict) -> float:
    return sum(c * math.log2(max(c, 2)) for c in occupancy.values())


def report_row(k: int, values, outcome, wall_time: float) -> dict:
    base = ComparisonCounter()
    merge_sort_counted(range(len(values)), values, base)
    ordered = [values[i] for i in outcome.order]
    ok = sorted(outcome.order) == list(range(len(values))) and ordered == sorted(values)
    groups = outcome.group_sizes
    return {
        "instance": k,
        "n": len(values),
        "total": outcome.total,
        "lookup": outcome.lookup,
        "merge": outcome.merge,
        "verify": outcome.verify,
        "fallback_sort": outcome.fallback_sort,
        "tree_fallbacks": outcome.tree_fallbacks,
        "correctness_fallback": int(outcome.correctness_fallback),
        "baseline": base.count,
        "groups": sum(groups.values()),
        "max_group": max(groups.values(), default=0),
        "occupancy_cost": round(occupancy_cost(outcome.occupancy), 6),
        "sorted_ok": int(ok),
        "wall_time": round(wall_time, 6),
    }


_WORKER_SORTER = None


def _init_worker(model):
    global _WORKER_SORTER
    _WORKER_SORTER = Sorter(model)


def _sort_chunk(args):
    start, rows = args
    out = []
    for k, row in enumerate(rows, start=start):
        values = row.tolist()
        t0 = time.perf_counter()
        res = _WORKER_SORTER(values)
        out.append(report_row(k, values, res, time.perf_counter() - t0))
    return out


def sort_rows(model, instances, jobs: int = 1) -> list[dict]:
    """Sort every instance and build one report row each, in instance order."""
    instances = np.asarray(instances, dtype=float)
    if instances.ndim != 2 or instances.shape[1] != model.n:
        raise DimensionMismatch(f"instances have length {instances.shape[-1]}, model expects {model.n}")
    if jobs <= 1 or len(instances) < 2 * jobs:
        _init_worker(model)
        return _sort_chunk((0, instances))
    size = math.ceil(len(instances) / jobs)
    chunks = [(s, instances[s : s + size]) for s in range(0, len(instances), size)]
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(model,)) as pool:
        parts = list(pool.map(_sort_chunk, chunks))
    return [row for part in parts for row in part]


def summarize(rows, num_intervals: int, entropy: float | None = None) -> dict:
    if not rows:
        return {"instances": 0}
    k = len(rows)

    def mean(key):
        return sum(r[key] for r in rows) / k

    summary = {
        "instances": k,
        "mean_total": mean("total"),
        "mean_lookup": mean("lookup"),
        "mean_merge": mean("merge"),
        "mean_verify": mean("verify"),
        "mean_baseline": mean("baseline"),
        "ratio_to_baseline": mean("total") / max(mean("baseline"), 1e-12),
        "max_group": max(r["max_group"] for r in rows),
        "mean_group_per_interval": sum(r["groups"] for r in rows) / (k * num_intervals),
        "max_occupancy_cost": max(r["occupancy_cost"] for r in rows),
        "correctness_fallbacks": sum(r["correctness_fallback"] for r in rows),
        "correctness_fallback_rate": sum(r["correctness_fallback"] for r in rows) / k,
        "mean_tree_fallbacks": mean("tree_fallbacks"),
        "sorted_ok": sum(r["sorted_ok"] for r in rows),
    }
    if entropy is not None:
        summary["perm_entropy_bits"] = entropy
    return summary


@dataclass
class BenchReport:
    config: RunConfig
    rows: list
    summary: dict


def run_bench(config: RunConfig) -> BenchReport:
    """Train (or load) a model, sort ``count`` instances and compare against merge sort.

    With a spec, training draws from seed ``seed`` and operation instances from
    ``seed + 1``, so the report's config replays to identical counts.
    """
    config.validate()
    spec = load_spec(config.spec) if config.spec else None
    if config.model:
        model = load_model(config.model)
    elif spec is not None:
        model = train_from_spec(spec, config.seed, config.epsilon, config.m)
    else:
        raise SpecError("model", "bench needs --model or --spec")
    if config.input:
        instances = read_stream(config.input)
    elif spec is not None:
        instances = spec.sample_batch(make_rng(config.seed + 1), config.count)
    else:
        raise SpecError("input", "bench needs --in or --spec for operation instances")
    rows = sort_rows(model, instances, config.jobs)
    entropy = None
    if spec is not None and spec.n <= 8:
        entropy = estimate_perm_entropy(spec, 100_000, config.seed + 2)
    num_intervals = model.vlist.size + 1
    return BenchReport(config, rows, summarize(rows, num_intervals, entropy))


def format_report(report: BenchReport, fmt: str) -> str:
    cfg = asdict(report.config)
    if fmt == "csv":
        buf = io.StringIO()
        buf.write("# config: " + json.dumps(cfg) + "\n")
        writer = csv.DictWriter(buf, fieldnames=INSTANCE_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(report.rows)
        buf.write("# summary: " + json.dumps(report.summary) + "\n")
        return buf.getvalue()
    lines = [json.dumps({"record": "config", **cfg})]
    lines += [json.dumps({"record": "instance", **row}) for row in report.rows]
    lines.append(json.dumps({"record": "summary", **report.summary}))
    return "\n".join(lines) + "\n"


def write_report(report: BenchReport, path, fmt: str) -> None:
    with open(path, "w") as fh:
        fh.write(format_report(report, fmt))


def read_report(path) -> BenchReport:
    with open(path) as fh:
        text = fh.read()
    if text.startswith("# config: "):
        head, _, rest = text.partition("\n")
        cfg = json.loads(head[len("# config: "):])
        body = [ln for ln in rest.splitlines() if not ln.startswith("# summary: ")]
        summ_line = [ln for ln in rest.splitlines() if ln.startswith("# summary: ")]
        rows = [_typed(r) for r in csv.DictReader(body)]
        summary = json.loads(summ_line[0][len("# summary: "):]) if summ_line else {}
        return BenchReport(RunConfig.from_dict(cfg), rows, summary)
    cfg, rows, summary = {}, [], {}
    for line in text.splitlines():
        rec = json.loads(line)
        kind = rec.pop("record")
        if kind == "config":
            cfg = rec
        elif kind == "instance":
            rows.append(rec)
        else:
            summary = rec
    return BenchReport(RunConfig.from_dict(cfg), rows, summary)


def _typed(row: dict) -> dict:
    out = {}
    for k, v in row.items():
        if k in ("occupancy_cost", "wall_time"):
            out[k] = float(v)
        else:
            out[k] = int(v)
    return out


COUNT_FIELDS = ("total", "lookup", "merge", "verify", "fallback_sort", "tree_fallbacks", "baseline")


def replay_matches(report: BenchReport) -> bool:
    """Re-run a report's embedded config and compare every comparison count."""
    again = run_bench(report.config)
    if len(again.rows) != len(report.rows):
        return False
    return all(a[f] == b[f] for a, b in zip(again.rows, report.rows) for f in COUNT_FIELDS)
