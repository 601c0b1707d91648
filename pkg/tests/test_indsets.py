import itertools
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from fracplane import indsets
from fracplane.indsets import (
    CORE_ONLY, IndependentSet, check_set, complete_with_spindles, core_completion, enumerate_mis,
    heavy_masks, independence_number, max_weight_is, max_weight_masks, maximal_independent_masks,
    random_maximal_core_set,
)
from fracplane.udgraph import (
    build_core, build_fisher_ullman, build_golomb, build_gpd, build_moser_spindle,
)


def random_masks(n, p, seed):
    rng = random.Random(seed)
    adj = [0] * n
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < p:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return adj


def brute_independent(adj):
    n = len(adj)
    for m in range(1 << n):
        if all(not (adj[v] & m) for v in indsets.bits(m)):
            yield m


def brute_maximal(adj):
    n = len(adj)
    out = set()
    for m in brute_independent(adj):
        if all((m >> v) & 1 or adj[v] & m for v in range(n)):
            out.add(m)
    return out


@given(st.integers(1, 12), st.floats(0.1, 0.7), st.integers(0, 10 ** 6))
def test_mis_enumeration_matches_brute_force(n, p, seed):
    adj = random_masks(n, p, seed)
    got = list(maximal_independent_masks(adj))
    assert len(got) == len(set(got))
    assert set(got) == brute_maximal(adj)


@given(st.integers(2, 14), st.floats(0.1, 0.6), st.integers(0, 10 ** 6), st.integers(2, 4))
def test_parts_cover_the_enumeration(n, p, seed, m):
    adj = random_masks(n, p, seed)
    whole = sorted(maximal_independent_masks(adj))
    split = sorted(x for k in range(m) for x in maximal_independent_masks(adj, (k, m)))
    assert whole == split


def test_mis_count_against_networkx():
    # maximal independent sets are the maximal cliques of the complement
    g = build_core(3)
    h = nx.complement(nx.Graph([(u, v) for u, v in g.edges()]))
    h.add_nodes_from(range(g.n))
    assert sum(1 for _ in enumerate_mis(g)) == sum(1 for _ in nx.find_cliques(h)) == 13303


@given(st.integers(1, 14), st.floats(0.1, 0.7), st.integers(0, 10 ** 6))
def test_max_weight_matches_brute_force(n, p, seed):
    adj = random_masks(n, p, seed)
    rng = random.Random(seed)
    w = [rng.randint(0, 9) for _ in range(n)]
    best = max(sum(w[v] for v in indsets.bits(m)) for m in brute_independent(adj))
    value, mask = max_weight_masks(adj, w)
    assert value == best
    assert sum(w[v] for v in indsets.bits(mask)) == value
    assert all(not (adj[v] & mask) for v in indsets.bits(mask))


@given(st.integers(1, 12), st.floats(0.1, 0.7), st.integers(0, 10 ** 6))
def test_heavy_masks_are_heavy_and_independent(n, p, seed):
    adj = random_masks(n, p, seed)
    w = [1 + (v % 3) for v in range(n)]
    limit = n // 2
    for value, m in heavy_masks(adj, w, limit, 5):
        assert value > limit and value == sum(w[v] for v in indsets.bits(m))
        assert all(not (adj[v] & m) for v in indsets.bits(m))


def test_small_independence_numbers():
    assert independence_number(build_moser_spindle()) == 2
    assert independence_number(build_golomb()) == 4


def test_fisher_ullman_max_weight_is_27():
    g = build_fisher_ullman()
    ind, value = max_weight_is(g)
    assert value == 27
    check_set(g, IndependentSet(ind.vertices))
    assert sum(g.vertices[v].weight for v in ind.vertices) == 27


def test_max_weight_agrees_with_networkx_on_fisher_ullman():
    g = build_fisher_ullman()
    h = nx.complement(nx.Graph(g.edges()))
    for v in range(g.n):
        h.add_node(v, weight=int(g.vertices[v].weight))
    _, value = nx.max_weight_clique(h, weight="weight")
    assert value == 27


def test_random_core_sets_are_maximal():
    g = build_core(4)
    rng = random.Random(3)
    for _ in range(20):
        check_set(g, random_maximal_core_set(g, rng))


def test_spindle_completion():
    g = build_gpd(2)
    rng = random.Random(5)
    core = random_maximal_core_set(g, rng)
    full = complete_with_spindles(g, core.vertices, rng)
    assert core.vertices <= full
    assert indsets.is_independent(g, full)
    for v in g.spindle_vertex_ids():
        assert v in full or g.adj[v] & full


def test_core_completion_keeps_weight():
    g = build_gpd(2)
    spindle_part = set()
    for s in g.spindles[:10]:
        if not g.adj[s.vertices[0]] & spindle_part:
            spindle_part.add(s.vertices[0])
    new, before, after = core_completion(g, spindle_part)
    assert after >= before
    assert indsets.is_maximal(g, [v for v in new if g.vertices[v].role == "core"], CORE_ONLY)


def test_spindle_neighbour_cap_below_core_weight():
    g = build_gpd(3)
    v = g.lattice_index[(0, 0)]
    assert indsets.spindle_neighbour_cap(g, v) < Fraction(31, 5)


def test_json_form():
    s = IndependentSet(frozenset({3, 1}), weight=Fraction(5, 2))
    assert s.to_json() == {"vertices": [1, 3], "scope": "whole_graph", "maximal": False,
                           "weight": {"num": 5, "den": 2}}


@pytest.mark.slow
def test_mis_count_core4():
    assert sum(1 for _ in enumerate_mis(build_core(4), CORE_ONLY)) == 5225425
