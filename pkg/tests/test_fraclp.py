import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from fracplane import fraclp
from fracplane.exactnum import point
from fracplane.fraclp import (
    EQ, GE, LE, Infeasible, OrbitPartition, RationalLP, Unbounded, WeightLP, fractional_chromatic,
    geometric_orbits, geometric_symmetries, is_automorphism, shared_spindle_orbits, simplex_solve,
    weight_lp_bound,
)
from fracplane.udgraph import (
    CORE, UDGraph, Vertex, build_fisher_ullman, build_golomb, build_moser_spindle,
)


def abstract_graph(n, edges):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return UDGraph("abstract", [Vertex(i, point(i, 0), CORE, Fraction(1)) for i in range(n)], adj)


def small_lp(seed):
    rng = random.Random(seed)
    n, m = rng.randint(1, 4), rng.randint(1, 5)
    lp = RationalLP()
    for j in range(n):
        lp.add_var(f"x{j}", obj=rng.randint(-3, 5), upper=rng.choice([None, rng.randint(1, 6)]))
    for _ in range(m):
        coeffs = {j: rng.randint(-2, 4) for j in range(n)}
        lp.add_row(coeffs, rng.choice([LE, LE, GE, EQ]), rng.randint(-2, 8))
    return lp


def scipy_value(lp):
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    n = len(lp.names)
    for row, sense, rhs in lp.rows:
        vec = [float(row.get(j, 0)) for j in range(n)]
        if sense == LE:
            A_ub.append(vec); b_ub.append(float(rhs))
        elif sense == GE:
            A_ub.append([-a for a in vec]); b_ub.append(-float(rhs))
        else:
            A_eq.append(vec); b_eq.append(float(rhs))
    bounds = [(float(lo) if lo is not None else None, float(hi) if hi is not None else None)
              for lo, hi in zip(lp.lower, lp.upper)]
    res = linprog(-np.array([float(c) for c in lp.objective]), A_ub=A_ub or None, b_ub=b_ub or None,
                  A_eq=A_eq or None, b_eq=b_eq or None, bounds=bounds, method="highs")
    return res.status, (-res.fun if res.status == 0 else None)


@given(st.integers(0, 10 ** 9))
def test_simplex_agrees_with_highs(seed):
    lp = small_lp(seed)
    status, value = scipy_value(lp)
    if status == 2:
        with pytest.raises(Infeasible):
            simplex_solve(lp)
    elif status == 3:
        with pytest.raises(Unbounded):
            simplex_solve(lp)
    else:
        res = simplex_solve(lp)  # verify=True re-checks both sides exactly
        assert abs(float(res.value) - value) < 1e-7


def test_free_variable_and_dual():
    lp = RationalLP()
    x = lp.add_var("x", obj=1, lower=None)
    y = lp.add_var("y", obj=1)
    lp.add_row({x: 1, y: 2}, LE, 4)
    lp.add_row({x: 1, y: -1}, LE, 1)
    res = simplex_solve(lp)
    assert res.value == Fraction(3)
    assert res.x == [Fraction(2), Fraction(1)]
    assert sum(yi * rhs for yi, (_, _, rhs) in zip(res.duals, lp.rows)) == res.value


def test_lp_text():
    lp = RationalLP()
    a = lp.add_var("a", obj=Fraction(1, 2))
    lp.add_row({a: 3}, LE, 1)
    text = lp.to_lp_text()
    assert "Maximize" in text and "c0: 3 a <= 1" in text and text.endswith("End\n")


def test_cycle_fractional_chromatic():
    c5 = abstract_graph(5, [(i, (i + 1) % 5) for i in range(5)])
    value, coloring = fractional_chromatic(c5)
    assert value == Fraction(5, 2)
    assert sum(y for _, y in coloring) == value


def test_moser_and_golomb():
    assert fractional_chromatic(build_moser_spindle())[0] == Fraction(7, 2)
    assert fractional_chromatic(build_golomb())[0] == Fraction(10, 3)
    assert weight_lp_bound(build_moser_spindle()).bound == Fraction(7, 2)
    assert weight_lp_bound(build_golomb()).bound == Fraction(10, 3)


@pytest.mark.parametrize("build", [build_moser_spindle, build_golomb])
def test_orbit_reduction_keeps_optimum(build):
    g = build()
    assert weight_lp_bound(g, geometric_orbits(g)).bound == weight_lp_bound(g).bound


def test_symmetries_are_automorphisms():
    g = build_fisher_ullman()
    perms = geometric_symmetries(g)
    assert len(perms) >= 3
    assert all(is_automorphism(g, p) for p in perms)


def test_fisher_ullman_lps():
    g = build_fisher_ullman()
    free = weight_lp_bound(g, geometric_orbits(g))
    assert free.bound == Fraction(311, 86)
    shared = weight_lp_bound(g, shared_spindle_orbits(g))
    assert shared.bound == Fraction(32, 9)
    # the shared-spindle optimum is the classical weighting scaled by 1/27
    assert all(shared.weights[v] * 27 == g.vertices[v].weight for v in range(g.n))


def test_weight_lp_certificate():
    g = build_golomb()
    res = weight_lp_bound(g)
    cover = [Fraction(0)] * g.n
    for s, y in zip(res.rows, res.duals):
        for v in s:
            cover[v] += y
    assert all(c >= 1 for c in cover)
    assert sum(res.duals) == res.bound
    assert res.to_json()["bound"] == {"num": 10, "den": 3}


def test_exact_path_without_float_hint():
    g = build_moser_spindle()
    assert WeightLP(g).solve(float_hint=False).bound == Fraction(7, 2)


def test_fixed_weights():
    g = build_moser_spindle()
    lp = WeightLP(g, fixed={0: Fraction(1, 2)})
    assert lp.solve().bound <= Fraction(7, 2)


def test_orbit_partition_validation():
    with pytest.raises(ValueError):
        OrbitPartition([[0, 1], [1, 2]])
    with pytest.raises(ValueError):
        OrbitPartition([[0]]).check(2)


def test_row_cap():
    with pytest.raises(fraclp.RowCapExceeded):
        fractional_chromatic(build_golomb(), cap=2)
