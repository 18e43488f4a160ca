import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import naive_has_hom, random_graph, random_instance
from signedhom.oracle import (
    BoundExceeded, check_homomorphism, edge_count, enumerate_homs, s_core, shom_easy, solve_bruteforce,
    switching_equivalent,
)
from signedhom.sgraph import (
    BI, BLUE, RED, Homomorphism, InputError, Instance, SignedGraph, apply_switching, cycle_graph, path_graph,
)

seeds = st.integers(0, 10 ** 9)


def _naive_maps(inst):
    """Vertex maps admitting some switch set, by trying every switch set."""
    G = inst.G
    out = set()
    for img in itertools.product(*(inst.lists[v] for v in G.vertices)):
        f = dict(zip(G.vertices, img))
        for bits in itertools.product((0, 1), repeat=len(G)):
            S = frozenset(v for v, b in zip(G.vertices, bits) if b)
            if check_homomorphism(inst, Homomorphism(f, S)):
                out.add(img)
                break
    return out


@settings(max_examples=150)
@given(seeds)
def test_bruteforce_matches_naive(seed):
    rng = random.Random(seed)
    H = random_graph(rng, rng.randint(1, 4))
    inst = random_instance(rng, H, rng.randint(1, 4))
    hom = solve_bruteforce(inst)
    assert (hom is not None) == naive_has_hom(inst)
    if hom is not None:
        assert check_homomorphism(inst, hom)


@settings(max_examples=60)
@given(seeds)
def test_enumerate_homs_lists_every_map_once(seed):
    rng = random.Random(seed)
    H = random_graph(rng, rng.randint(1, 3))
    inst = random_instance(rng, H, rng.randint(1, 4))
    homs = enumerate_homs(inst)
    maps = [tuple(h.mapping[v] for v in inst.G.vertices) for h in homs]
    assert len(maps) == len(set(maps))
    assert set(maps) == _naive_maps(inst)
    assert all(check_homomorphism(inst, h) for h in homs)


def test_enumerate_homs_limit():
    inst = Instance(path_graph([BLUE] * 3), path_graph([BI] * 3, prefix="h"))
    assert len(enumerate_homs(inst, limit=5)) == 5
    with pytest.raises(InputError):
        enumerate_homs(inst, limit=0)


def test_check_homomorphism_rejects():
    H = path_graph([BLUE], prefix="h")
    G = path_graph([RED])
    inst = Instance(G, H, {"v1": ["h1"]})
    assert not check_homomorphism(inst, Homomorphism({"v1": "h1", "v2": "h2"}))
    assert check_homomorphism(inst, Homomorphism({"v1": "h1", "v2": "h2"}, frozenset({"v2"})))
    assert not check_homomorphism(inst, Homomorphism({"v1": "h2", "v2": "h1"}, frozenset({"v2"})))
    assert not check_homomorphism(inst, Homomorphism({"v1": "h1"}))


def test_bicoloured_edges_need_bicoloured_images():
    H = path_graph([BLUE], prefix="h", loops={1: BLUE, 2: RED})
    assert solve_bruteforce(Instance(path_graph([BI]), H)) is None
    assert solve_bruteforce(Instance(path_graph([BLUE]), H)) is not None


def _naive_core_edges(H):
    for size in range(1, len(H) + 1):
        for W in itertools.combinations(H.vertices, size):
            if naive_has_hom(Instance(H, H, {v: list(W) for v in H.vertices})):
                return edge_count(H.induced(W))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_s_core_size_matches_naive(seed):
    rng = random.Random(seed)
    H = random_graph(rng, rng.randint(1, 4))
    rep = s_core(H)
    assert rep.edgeCount == _naive_core_edges(H)
    assert solve_bruteforce(Instance(H, rep.core)) is not None


def test_s_core_examples():
    # a balanced 4-cycle folds onto one edge; an unbalanced one does not fold
    assert s_core(cycle_graph([BLUE] * 4)).edgeCount == 1
    assert s_core(cycle_graph([BLUE, BLUE, BLUE, RED])).edgeCount == 4
    assert s_core(path_graph([BI, BLUE])).edgeCount == 2
    assert shom_easy(path_graph([BI, BLUE]))
    assert not shom_easy(cycle_graph([BLUE] * 5))
    with pytest.raises(BoundExceeded):
        s_core(path_graph([BLUE] * 11))


@given(seeds)
def test_switching_equivalent_finds_the_switch(seed):
    rng = random.Random(seed)
    A = random_graph(rng, rng.randint(1, 7))
    S = {v for v in A.vertices if rng.random() < 0.5}
    B = apply_switching(A, S)
    got = switching_equivalent(A, B)
    assert got is not None and apply_switching(A, got) == B


def test_switching_equivalent_negative_and_errors():
    assert switching_equivalent(cycle_graph([BLUE] * 3), cycle_graph([BLUE, BLUE, RED])) is None
    A = SignedGraph(["a"], [], {"a": BLUE})
    assert switching_equivalent(A, SignedGraph(["a"], [], {"a": RED})) is None
    with pytest.raises(InputError):
        switching_equivalent(path_graph([BLUE]), path_graph([BLUE, BLUE]))
