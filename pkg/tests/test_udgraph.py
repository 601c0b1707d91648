import math

import pytest
from hypothesis import given, strategies as st

from fracplane import lattice as lat
from fracplane.exactnum import ONE, QuadExt, dist2
from fracplane.udgraph import (
    CORE, SPINDLE, build_core, build_fisher_ullman, build_gd, build_golomb, build_gpd,
    build_moser_spindle, edge_census, parse_selector, verify_embedding,
)


def test_moser_spindle():
    g = build_moser_spindle()
    assert (g.n, g.num_edges()) == (7, 11)
    assert verify_embedding(g).ok


def test_golomb_graph():
    g = build_golomb()
    assert (g.n, g.num_edges()) == (10, 18)
    assert verify_embedding(g).ok


def test_fisher_ullman_counts():
    g = build_fisher_ullman()
    assert g.n == 57
    assert len(g.core_ids()) == 12 and len(g.spindles) == 15
    assert edge_census(g) == {"core": 24, "within_spindle": 90, "same_direction": 63, "other": 21}
    assert g.total_weight() == 96
    assert sum(g.vertices[v].weight for v in g.core_ids()) == 51
    assert verify_embedding(g).ok


def test_fisher_ullman_has_threefold_symmetry():
    g = build_fisher_ullman()
    dirs = sorted(s.direction for s in g.spindles)
    assert dirs == [1] * 5 + [3] * 5 + [5] * 5


@pytest.mark.parametrize("d", [0, 1, 2, 5, 8])
def test_core_size(d):
    g = build_core(d)
    # norm i^2 + ij + j^2 <= d^2 forces |i|, |j| <= 2d/sqrt3
    r = 2 * d
    assert g.n == sum(1 for i in range(-r, r + 1) for j in range(-r, r + 1)
                      if i * i + i * j + j * j <= d * d)


def _diamonds(d, directions):
    pts = set(lat.disk(d))
    return sum(1 for p in pts for k in directions
               if {lat.add(p, lat.UNIT[k]), lat.add(p, lat.UNIT[(k + 1) % 6]), lat.add(p, lat.LONG[k])} <= pts)


@pytest.mark.parametrize("d,vertices,core,spindles,edges", [
    (2, 199, 19, 60, 852),
    (3, 469, 37, 144, 2262),
    (4, 853, 61, 264, 4338),
])
def test_gpd_counts(d, vertices, core, spindles, edges):
    g = build_gpd(d)
    assert (g.n, len(g.core_ids()), len(g.spindles), g.num_edges()) == (vertices, core, spindles, edges)
    assert len(g.spindles) == _diamonds(d, range(6))
    assert g.merges == 0
    assert len(g.spindle_vertex_ids()) == 3 * len(g.spindles)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_gd_spindle_vertex_count(d):
    g = build_gd(d)
    assert len(g.spindles) == _diamonds(d, lat.CW_DIRECTIONS)
    assert len(g.spindle_vertex_ids()) == 3 * len(g.spindles)
    assert {g.vertices[v].weight for v in g.core_ids()} == {12}


def test_spindle_geometry_g2():
    g = build_gpd(2)
    for s in g.spindles:
        b, t = g.vertices[s.bottom].point, g.vertices[s.top].point
        s1, s2, s3 = (g.vertices[x].point for x in s.vertices)
        assert dist2(b, s1) == ONE and dist2(b, s2) == ONE
        assert dist2(t, s3) == ONE
        assert dist2(b, s3) == QuadExt(3)
        assert dist2(s1, s2) == ONE and dist2(s1, s3) == ONE and dist2(s2, s3) == ONE


def test_each_bottom_direction_has_one_spindle():
    g = build_gpd(3)
    keys = [(s.bottom, s.direction) for s in g.spindles]
    assert len(keys) == len(set(keys))


def test_embedding_of_spindled_core():
    assert verify_embedding(build_gd(2)).ok


@given(st.integers(0, 3), st.integers(0, 10 ** 6))
def test_spindle_vertices_are_far_from_lattice(d, pick):
    g = build_gd(max(d, 1))
    if not g.spindles:
        return
    s = g.spindles[pick % len(g.spindles)]
    x, y = g.vertices[s.vertices[0]].point.approx()
    # spindle vertices never sit on lattice points
    j = round(y / (math.sqrt(3) / 2))
    i = round(x - j / 2)
    assert math.hypot(x - (i + j / 2), y - j * math.sqrt(3) / 2) > 1e-3


def test_parse_selector():
    assert parse_selector("core:2").n == 19
    assert parse_selector("moser").n == 7
    with pytest.raises(ValueError):
        parse_selector("hexagon")
    roles = {v.role for v in parse_selector("gd:1").vertices}
    assert roles <= {CORE, SPINDLE}
