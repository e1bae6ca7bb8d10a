import pytest
from hypothesis import given, settings, strategies as st

import random

from bmatch.core import validate
from bmatch.gen import PROFILES, random_degree_set, random_instance


def test_same_seed_same_instance():
    a = random_instance(11, 6, 9, profile="mixed", weights=(-5, 5))
    b = random_instance(11, 6, 9, profile="mixed", weights=(-5, 5))
    assert a == b


def test_different_seeds_differ():
    a = random_instance(1, 8, 12)
    b = random_instance(2, 8, 12)
    assert a != b


@settings(max_examples=60)
@given(st.integers(0, 10_000), st.sampled_from(PROFILES))
def test_generated_instances_always_validate(seed, profile):
    inst = random_instance(seed, n=1 + seed % 7, m=seed % 11, profile=profile)
    assert validate(inst) == []


def test_profile_shapes():
    rng = random.Random(0)
    for _ in range(200):
        interval = random_degree_set(rng, 6, "interval")
        assert all(b - a == 1 for a, b in zip(interval.values, interval.values[1:]))
        parity = random_degree_set(rng, 6, "parity")
        assert all(b - a == 2 for a, b in zip(parity.values, parity.values[1:]))
        mixed = random_degree_set(rng, 6, "mixed")
        assert all(b - a in (1, 2) for a, b in zip(mixed.values, mixed.values[1:]))


def test_rejects_unknown_profile():
    with pytest.raises(ValueError):
        random_degree_set(random.Random(0), 4, "bogus")


def test_loops_flag():
    inst = random_instance(5, 4, 30, loops=False)
    assert all(u != v for u, v, _w in inst.graph.edges)


def test_weight_range_respected():
    inst = random_instance(5, 4, 30, weights=(-2, 3))
    assert all(-2 <= w <= 3 for _u, _v, w in inst.graph.edges)


def test_objective_passthrough():
    assert random_instance(0, 2, 2, objective="min-weight").objective == "min-weight"
