"""Acceptance criteria, each at its stated tolerance.

Every test logs its clause through the ``record`` fixture; the terminal
summary prints one PASS/FAIL line per criterion. The n=1024 measurements
share module-scoped fixtures (10^4 operation instances per spec).
"""
import bisect
import math
import random
import time

import numpy as np
import pytest

from selfsort.bench import RunConfig, read_report, replay_matches, run_bench, sort_rows, summarize, write_report
from selfsort.core import VList, predecessor_index
from selfsort.freq_bst import build_freq_bst
from selfsort.generators import (ProductSpec, ScalarDist, estimate_perm_entropy, instance_stream, make_rng,
                                 near_deterministic_mixture_spec, random_linear_spec, random_mixture_spec, save_spec)
from selfsort.linear_learner import detect_degenerates, learn_classes, learning_batch_size
from selfsort.linear_sorter import train_linear
from selfsort.mixture_sorter import train_mixture
from selfsort.slab_index import ClassLine, build_slab_index, slab_entries
from selfsort.veb import VebTree

from oracles import midpoint_entries

N = 1024
OPERATION_INSTANCES = 10_000


def banded_linear_spec():
    return random_linear_spec(N, 8, seed=0, band_gap=10.0)


def bands_mixture_spec():
    return near_deterministic_mixture_spec(N, 4, m=4, seed=0)


@pytest.fixture(scope="module")
def linear_run():
    spec = banded_linear_spec()
    model = train_linear(instance_stream(spec, 1), 0.5, n=N)
    rows = sort_rows(model, spec.sample_batch(make_rng(2), OPERATION_INSTANCES))
    return model, rows, summarize(rows, model.vlist.size + 1)


@pytest.fixture(scope="module")
def mixture_run():
    spec = bands_mixture_spec()
    model = train_mixture(instance_stream(spec, 1), n=N, m=4, epsilon=0.5)
    rows = sort_rows(model, spec.sample_batch(make_rng(2), OPERATION_INSTANCES))
    return model, rows, summarize(rows, model.num_intervals)


# --- 1: unconditional correctness ---------------------------------------------


def correctness_specs():
    rnd = random.Random(2024)
    lin = [random_linear_spec(rnd.randint(10, 80), rnd.randint(1, 6), n_degenerate=rnd.randint(0, 5), seed=s)
           for s in range(20)]
    mix = []
    for s in range(20):
        kappa = rnd.choice([1, 2, 4])
        m = max(kappa, rnd.choice([2, 4, 8]))
        mix.append(random_mixture_spec(rnd.randint(10, 60), kappa, m=m, seed=100 + s))
    return lin, mix


def test_c1_correctness(record):
    t0 = time.perf_counter()
    lin, mix = correctness_specs()
    per_spec = OPERATION_INSTANCES // 40
    total = ok = fallbacks = 0
    for k, spec in enumerate(lin + mix):
        if k < 20:
            model = train_linear(instance_stream(spec, k), 0.5)
        else:
            model = train_mixture(instance_stream(spec, k), m=spec.m, epsilon=0.5)
        rows = sort_rows(model, spec.sample_batch(make_rng(10_000 + k), per_spec))
        total += len(rows)
        ok += sum(r["sorted_ok"] for r in rows)
        fallbacks += sum(r["correctness_fallback"] for r in rows)
    elapsed = time.perf_counter() - t0
    rate = fallbacks / total
    passed = total >= 10_000 and ok == total and rate <= 0.01 and elapsed < 120
    record("1", "oracle agreement", passed,
           f"{ok}/{total} sorted, fallback rate {rate:.4%}, {elapsed:.1f}s (limit 120s)")
    assert total >= 10_000 and ok == total
    assert rate <= 0.01
    assert elapsed < 120


# --- 2: class recovery ----------------------------------------------------------


def test_c2_class_recovery(record):
    good = 0
    for seed in range(100):
        spec = random_linear_spec(50, 5, n_degenerate=5, seed=seed)
        assert sorted(len(c) for c in spec.classes) == [9] * 5
        rows = np.array(list(instance_stream(spec, seed, count=learning_batch_size(50))))
        degs = detect_degenerates(rows)
        part = learn_classes(rows, degs)
        good += part.class_sets() == spec.partition() and degs == spec.degenerates
    record("2", "exact partition", good >= 95, f"{good}/100 seeds (need >= 95)")
    assert good >= 95


# --- 3, 4: entropy adaptivity -------------------------------------------------


def test_c3_linear_comparisons(linear_run, record):
    _, _, s = linear_run
    ok = s["mean_total"] <= 6 * N
    record("3", "self-improving mean <= 6n", ok,
           f"mean {s['mean_total']:.1f} vs 6144, ratio to merge sort {s['ratio_to_baseline']:.3f}")
    assert s["sorted_ok"] == s["instances"]
    assert ok


def test_c3_linear_baseline(linear_run, record):
    _, _, s = linear_run
    ok = s["mean_baseline"] >= 9000
    record("3", "merge-sort baseline >= 9000", ok, f"baseline mean {s['mean_baseline']:.1f}")
    assert ok


def test_c4_mixture_comparisons(mixture_run, record):
    _, _, s = mixture_run
    ok = s["mean_total"] <= 8 * N
    record("4", "self-improving mean <= 8n", ok,
           f"mean {s['mean_total']:.1f} vs 8192 (lookup {s['mean_lookup']:.0f}, "
           f"tree fallbacks {s['mean_tree_fallbacks']:.0f}/instance), "
           f"ratio to merge sort {s['ratio_to_baseline']:.3f}")
    assert s["sorted_ok"] == s["instances"]
    assert ok


def test_c4_mixture_baseline(mixture_run, record):
    _, _, s = mixture_run
    ok = s["mean_baseline"] >= 9000
    record("4", "merge-sort baseline >= 9000", ok, f"baseline mean {s['mean_baseline']:.1f}")
    assert ok


# --- 5: interval occupancy ------------------------------------------------------


@pytest.mark.parametrize("which", ["linear_run", "mixture_run"])
def test_c5_occupancy(which, request, record):
    model, rows, s = request.getfixturevalue(which)
    worst = max(r["occupancy_cost"] for r in rows)
    ok = len(rows) >= 10_000 and s["mean_group_per_interval"] <= 4 and worst <= 8 * N
    record("5", which.split("_")[0], ok,
           f"mean group size per interval {s['mean_group_per_interval']:.3f} (<= 4), "
           f"max sum |N_r| log2 |N_r| {worst:.0f} (<= 8192)")
    assert ok


# --- 6: structure oracles ---------------------------------------------------------


def test_c6a_veb(record):
    rnd = random.Random(6)
    u = 1 << 10
    tree, ref = VebTree(u), []
    mismatches = 0
    for _ in range(100_000):
        op, x = rnd.randrange(4), rnd.randrange(u)
        pos = bisect.bisect_left(ref, x)
        present = pos < len(ref) and ref[pos] == x
        if op == 0:
            tree.insert(x)
            if not present:
                ref.insert(pos, x)
        elif op == 1:
            tree.delete(x)
            if present:
                ref.pop(pos)
        elif op == 2:
            mismatches += tree.contains(x) != present
        else:
            j = bisect.bisect_right(ref, x)
            mismatches += tree.successor(x) != (ref[j] if j < len(ref) else None)
        mismatches += tree.min() != (ref[0] if ref else None)
    record("6a", "vEB vs sorted list, 1e5 ops", mismatches == 0, f"{mismatches} mismatches")
    assert mismatches == 0


def test_c6b_slab_entries(record):
    bad = 0
    for seed in range(1000):
        rnd = random.Random(seed)
        s = rnd.randint(1, 6)
        lines = [ClassLine(k, rnd.choice([-1, 1]) * rnd.uniform(0.2, 3.0), rnd.uniform(-2, 2)) for k in range(s)]
        vlist = VList(tuple(sorted(rnd.uniform(-4, 4) for _ in range(rnd.randint(0, 12)))))
        idx = build_slab_index(lines, vlist)
        bad += any(slab_entries(idx, j) != midpoint_entries(lines, idx.boundaries, list(vlist.boundaries), j)
                   for j in range(idx.num_slabs))
    record("6b", "slab entries vs midpoints, 1000 seeds", bad == 0, f"{bad} disagreeing arrangements")
    assert bad == 0


def test_c6c_freq_bst_depth(record):
    rnd = random.Random(7)
    bad = 0
    for _ in range(1000):
        size = rnd.randint(1, 300)
        w = [rnd.choice([1, rnd.randint(1, 20), rnd.randint(1, 10_000)]) for _ in range(size)]
        t = build_freq_bst(list(range(size)), [(i, i + 1) for i in range(size)], w, 99)
        W = sum(w)
        d = t.depths()
        bad += any(d[k] > math.log2(W / w[k]) + 2 for k in range(size))
    record("6c", "depth <= log2(W/w)+2, 1000 vectors", bad == 0, f"{bad} violating trees")
    assert bad == 0


def test_c6d_predecessor(record):
    rnd = random.Random(8)
    bad = 0
    for _ in range(100_000):
        bounds = sorted(rnd.choice([rnd.uniform(-5, 5), float(rnd.randint(-3, 3))]) for _ in range(rnd.randint(0, 20)))
        x = rnd.choice([rnd.uniform(-6, 6), float(rnd.randint(-3, 3))])
        bad += predecessor_index(VList(tuple(bounds)), x) != sum(v <= x for v in bounds)
    record("6d", "predecessor vs linear scan, 1e5 trials", bad == 0, f"{bad} mismatches")
    assert bad == 0


# --- 7: entropy oracle ---------------------------------------------------------


def test_c7_entropy(record):
    bands = ProductSpec(tuple(ScalarDist.uniform(i, i + 0.5) for i in range(6)))
    h0 = estimate_perm_entropy(bands, 100_000, seed=0)
    h1 = estimate_perm_entropy(ProductSpec((ScalarDist.uniform(0, 1),) * 2), 100_000, seed=0)
    ok = abs(h0) <= 0.01 and abs(h1 - 1) <= 0.05
    record("7", "entropy estimates", ok, f"deterministic {abs(h0):.4f} (0 +- 0.01), n=2 uniform {h1:.4f} (1 +- 0.05)")
    assert ok


# --- 8: reproducibility ---------------------------------------------------------


@pytest.mark.parametrize("kind,fmt", [("linear", "csv"), ("mixture", "jsonl")])
def test_c8_replay(tmp_path, kind, fmt, record):
    spec_path = tmp_path / "spec.json"
    spec = random_linear_spec(200, 5, n_degenerate=3, seed=8) if kind == "linear" else \
        near_deterministic_mixture_spec(200, 3, m=4, seed=8)
    save_spec(spec, spec_path)
    cfg = RunConfig(command="bench", spec=str(spec_path), seed=31, count=300, format=fmt)
    out = tmp_path / f"report.{fmt}"
    write_report(run_bench(cfg), out, fmt)
    old = read_report(out)
    ok = replay_matches(old)
    record("8", kind, ok, f"{len(old.rows)} instances replayed from {fmt} report")
    assert ok
