import math

import pytest
from hypothesis import given, settings, strategies as st

from selfsort.core import ComparisonCounter
from selfsort.errors import InsufficientTraining
from selfsort.generators import MixtureSpec, ScalarDist, instance_stream, make_rng, random_mixture_spec
from selfsort.mixture_sorter import (OperationScratch, bucket_of, model_from_dict, model_to_dict, sort_mixture,
                                     train_mixture, training_sizes)

from conftest import is_sorting_order


def test_layout_n4_m2():
    spec = random_mixture_spec(4, 2, seed=0)
    model = train_mixture(instance_stream(spec, 0), m=2)
    assert model.num_intervals == 9
    assert model.bucket_sizes() == [2, 2, 2, 3]


def test_layout_m1_is_classic():
    spec = random_mixture_spec(6, 1, seed=0)
    model = train_mixture(instance_stream(spec, 0), m=1)
    assert model.num_intervals == 7
    assert model.bucket_sizes() == [1, 1, 1, 1, 1, 2]


def test_training_sizes():
    block, stride, freq = training_sizes(4, 2, 0.5)
    assert (block, stride, freq) == (6, 3, 3)
    assert bucket_of(8, 2, 4) == 3 and bucket_of(7, 2, 4) == 3 and bucket_of(5, 2, 4) == 2


def test_constant_components_single_node_trees():
    spec = MixtureSpec(n=5, components=((1.0, tuple(ScalarDist.constant(c) for c in (3, 1, 4, 1.5, 9))),), m=1)
    model = train_mixture(instance_stream(spec, 0), m=1)
    assert all(len(t) == 1 for t in model.trees)


def test_n1():
    spec = MixtureSpec(n=1, components=((1.0, (ScalarDist.uniform(0, 1),)),), m=1)
    model = train_mixture(instance_stream(spec, 0), m=1)
    out = sort_mixture(model, OperationScratch(model), [0.5])
    assert out.order == [0]


def test_short_stream():
    spec = random_mixture_spec(4, 2, seed=0)
    with pytest.raises(InsufficientTraining):
        train_mixture(instance_stream(spec, 0, count=5), m=2)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 40), st.sampled_from([1, 2, 4]), st.sampled_from([2, 4, 8]), st.integers(0, 2**32 - 1))
def test_always_sorted_and_scratch_reset(n, kappa, m, seed):
    m = max(m, kappa)
    spec = random_mixture_spec(n, kappa, m=m, seed=seed)
    model = train_mixture(instance_stream(spec, seed), m=m)
    scratch = OperationScratch(model)
    for row in spec.sample_batch(make_rng(seed + 1), 30):
        c = ComparisonCounter()
        out = sort_mixture(model, scratch, row, c)
        assert is_sorting_order(row.tolist(), out.order)
        assert c.count == out.total
        assert scratch.is_empty()
        touched = len(out.occupancy)
        buckets = len({min(r // m, n - 1) for r in out.occupancy})
        assert scratch.veb_ops <= n + 2 * touched + buckets
    depth_limit = math.ceil(math.log2(math.log2(max(4, scratch.vebs[-1].capacity)))) + 1
    assert all(v.max_depth <= depth_limit for v in scratch.vebs)


def test_distinct_intervals_need_no_sorting():
    comps = ((1.0, tuple(ScalarDist.uniform(10 * i, 10 * i + 1) for i in range(8))),)
    spec = MixtureSpec(n=8, components=comps, m=1)
    model = train_mixture(instance_stream(spec, 0), m=1)
    scratch = OperationScratch(model)
    for row in spec.sample_batch(make_rng(3), 20):
        out = sort_mixture(model, scratch, row)
        if max(out.occupancy.values()) == 1:
            assert out.merge == 0


def test_model_roundtrip():
    spec = random_mixture_spec(12, 2, m=2, seed=5)
    model = train_mixture(instance_stream(spec, 5), m=2)
    back = model_from_dict(model_to_dict(model))
    s1, s2 = OperationScratch(model), OperationScratch(back)
    for row in spec.sample_batch(make_rng(0), 20):
        a, b = sort_mixture(model, s1, row), sort_mixture(back, s2, row)
        assert (a.order, a.total) == (b.order, b.total)
