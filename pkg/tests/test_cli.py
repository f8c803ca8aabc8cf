import json

import pytest

from selfsort.bench import INSTANCE_FIELDS, read_report
from selfsort.cli import main
from selfsort.generators import (MixtureSpec, ScalarDist, near_deterministic_mixture_spec, random_linear_spec,
                                 random_mixture_spec, save_spec)
from selfsort.streams import read_permutations, read_stream


@pytest.fixture
def specs(tmp_path):
    lin, mix = tmp_path / "lin.json", tmp_path / "mix.json"
    save_spec(random_linear_spec(24, 3, n_degenerate=2, seed=1), lin)
    save_spec(random_mixture_spec(16, 2, m=2, seed=1), mix)
    return lin, mix


def run(*args):
    return main([str(a) for a in args])


@pytest.mark.parametrize("fmt", ["text", "binary"])
def test_gen_is_deterministic(tmp_path, specs, fmt):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run("gen", "--spec", specs[0], "--out", a, "--count", 20, "--seed", 5, "--format", fmt) == 0
    assert run("gen", "--spec", specs[0], "--out", b, "--count", 20, "--seed", 5, "--format", fmt) == 0
    assert a.read_bytes() == b.read_bytes()
    assert read_stream(a).shape == (20, 24)


def test_constant_spec_gives_identical_lines(tmp_path):
    spec = tmp_path / "c.json"
    save_spec(MixtureSpec(3, ((1.0, tuple(ScalarDist.constant(c) for c in (1, 2, 3))),)), spec)
    out = tmp_path / "c.txt"
    run("gen", "--spec", spec, "--out", out, "--count", 3)
    lines = out.read_text().splitlines()[1:]
    assert len(lines) == 3 and len(set(lines)) == 1


def test_train_sort_verify_linear(tmp_path, specs, capsys):
    model, inst, perm = tmp_path / "m.json", tmp_path / "i.txt", tmp_path / "p.txt"
    run("gen", "--spec", specs[0], "--out", inst, "--count", 30, "--seed", 9)
    assert run("train-linear", "--spec", specs[0], "--out", model) == 0
    assert run("sort", "--model", model, "--in", inst, "--out", perm) == 0
    rows = read_stream(inst)
    for row, p in zip(rows, read_permutations(perm)):
        assert list(row[p]) == sorted(row)
    capsys.readouterr()
    assert run("verify", "--model", model, "--in", inst, "--spec", specs[0]) == 0
    out = capsys.readouterr().out
    assert "sorted: 30/30" in out and "partition: match" in out


def test_verify_reports_partition_mismatch(tmp_path, specs, capsys):
    other = tmp_path / "other.json"
    save_spec(random_linear_spec(24, 3, n_degenerate=2, seed=2), other)
    model, inst = tmp_path / "m.json", tmp_path / "i.txt"
    run("gen", "--spec", specs[0], "--out", inst, "--count", 5)
    run("train-linear", "--spec", specs[0], "--out", model)
    assert run("verify", "--model", model, "--in", inst, "--spec", other) == 1
    assert "partition: mismatch" in capsys.readouterr().out


def test_mixture_inspect(tmp_path, specs, capsys):
    model = tmp_path / "m.json"
    assert run("train-mixture", "--spec", specs[1], "--out", model) == 0
    capsys.readouterr()
    run("inspect", "--model", model)
    info = json.loads(capsys.readouterr().out)
    assert info["intervals"] == 33 and info["bucket_sizes"][-1] == 3 and len(info["bucket_sizes"]) == 16


def test_linear_inspect_has_slab_counts(tmp_path, specs, capsys):
    model = tmp_path / "m.json"
    run("train-linear", "--spec", specs[0], "--out", model)
    capsys.readouterr()
    run("inspect", "--model", model)
    info = json.loads(capsys.readouterr().out)
    assert len(info["slab_counts"]) == info["classes"] == 3


def test_csv_and_jsonl_carry_same_rows(tmp_path, specs):
    c, j = tmp_path / "r.csv", tmp_path / "r.jsonl"
    run("bench", "--spec", specs[1], "--count", 25, "--seed", 2, "--out", c, "--format", "csv")
    run("bench", "--spec", specs[1], "--count", 25, "--seed", 2, "--out", j, "--format", "jsonl")
    rc, rj = read_report(c), read_report(j)
    assert list(rc.rows[0]) == list(INSTANCE_FIELDS) == list(rj.rows[0])
    strip = [{k: v for k, v in r.items() if k != "wall_time"} for r in rc.rows]
    assert strip == [{k: v for k, v in r.items() if k != "wall_time"} for r in rj.rows]
    assert rc.config == rj.config.__class__(**{**rj.config.__dict__, "format": "csv", "out": str(c)})


@pytest.mark.parametrize("fmt", ["csv", "jsonl"])
def test_replay(tmp_path, specs, fmt, capsys):
    rep = tmp_path / f"r.{fmt}"
    run("bench", "--spec", specs[0], "--count", 20, "--seed", 7, "--out", rep, "--format", fmt)
    assert run("bench", "--replay", rep) == 0
    assert "identical" in capsys.readouterr().out


def test_replay_detects_tampering(tmp_path, specs):
    rep = tmp_path / "r.jsonl"
    run("bench", "--spec", specs[0], "--count", 5, "--out", rep)
    lines = rep.read_text().splitlines()
    rec = json.loads(lines[1])
    rec["total"] += 1
    lines[1] = json.dumps(rec)
    rep.write_text("\n".join(lines) + "\n")
    assert run("bench", "--replay", rep) == 1


def test_config_errors_exit_2(tmp_path, specs, capsys):
    assert run("bench", "--spec", specs[0], "--epsilon", 1.5) == 2
    assert run("train-mixture", "--spec", specs[1], "--out", tmp_path / "m", "--m", 0) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"format_version": 1, "type": "mixture", "n": 2, "components": []}')
    assert run("gen", "--spec", bad, "--out", tmp_path / "x") == 2
    assert "components" in capsys.readouterr().err


def test_dimension_mismatch_exit_2(tmp_path, specs):
    model, inst = tmp_path / "m.json", tmp_path / "i.txt"
    run("train-mixture", "--spec", specs[1], "--out", model)
    run("gen", "--spec", specs[0], "--out", inst, "--count", 3)
    assert run("sort", "--model", model, "--in", inst) == 2


def test_near_deterministic_bench_beats_merge_sort(tmp_path):
    spec = tmp_path / "bands.json"
    save_spec(near_deterministic_mixture_spec(1024, 4, seed=0), spec)
    rep = tmp_path / "r.jsonl"
    run("bench", "--spec", spec, "--count", 50, "--out", rep)
    s = read_report(rep).summary
    assert s["sorted_ok"] == 50
    assert s["mean_total"] < s["mean_baseline"]
