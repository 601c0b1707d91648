import json
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import Bounds, LinearConstraint, milp

from fracplane import discharge as ds
from fracplane import lattice as lat
from fracplane import tiling as tl
from fracplane.indsets import complete_with_spindles, is_independent, random_maximal_core_set
from fracplane.udgraph import build_core, build_gd


def test_simple_case_table():
    for case in ds.SIMPLE_CASES.values():
        assert case.total == ds.SIMPLE_CAP
    assert ds.SIMPLE_BOUND == F(7, 2)


def test_simple_discharge_single_run():
    g = build_gd(4)
    core_set = random_maximal_core_set(g, random.Random(5)).vertices
    I = complete_with_spindles(g, core_set, random.Random(6))
    rep = ds.simple_discharge(g, I)
    assert rep.ok
    assert all(x <= ds.SIMPLE_CAP for x in rep.final.values())
    # only vertices with six core neighbours and six spindles are classified
    inc = g.incident_spindles()
    full = [v for v in g.core_ids() if len(ds._core_nbrs(g, v)) == 6 and len(inc.get(v, ())) == 6]
    assert sum(rep.case_count.values()) == len(full) == len(rep.final)


@pytest.mark.parametrize("d", [3, 4])
def test_simple_verify_samples(d):
    rep = ds.simple_verify(d, samples=60, seed=11)
    assert rep.ok and rep.tally.runs == 60
    assert max(rep.tally.case_max.values()) == ds.SIMPLE_CAP


@given(moves=st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5),
                                st.fractions(min_value=-3, max_value=3)), max_size=40))
def test_ledger_conserves_charge(moves):
    led = ds.ChargeLedger()
    for k in range(6):
        led.deposit(ds.V(k), F(31, 5))
    for a, b, x in moves:
        led.move(ds.V(a), ds.V(b), x, "r")
    led.check("moves")
    assert led.total == 6 * F(31, 5)
    assert sum(led.moves.values()) == len(moves)


def test_ledger_detects_leak():
    led = ds.ChargeLedger()
    led.deposit(ds.V(0), F(1))
    led.charge[ds.V(0)] += F(1, 7)
    with pytest.raises(ds.ConservationError):
        led.check("leak")


def test_retained_and_asymptotic_constants():
    assert ds.CORE_WEIGHT - ds.RETAINED == 2
    assert (ds.CORE_WEIGHT + 18 * ds.SPINDLE_WEIGHT) / ds.RETAINED == ds.ASYMPTOTIC == F(76, 21)
    # a missing spindle can absorb at most its own weight from the block rules
    assert 2 * ds.R6_FIVE <= ds.SPINDLE_WEIGHT
    assert 4 * ds.R6_SIX <= ds.SPINDLE_WEIGHT


def test_five_blocks_geometry():
    corners = tl.TEMPLATES["T2"].corners
    blocks = ds.five_blocks(corners)
    assert len(blocks) == 3
    for blk in blocks:
        p, q = blk.side
        assert blk.bottoms[0] == p and blk.bottoms[4] == q
        assert len(set(blk.bottoms)) == 5
        r = next(c for c in corners if c not in (p, q))
        assert lat.add(ds._midpoint(p, q), lat.LONG[blk.direction]) == r
        for b in blk.bottoms:
            assert tl.locate(b, corners) >= 0


def test_six_blocks_geometry():
    corners = tl.TEMPLATES["T6"].corners
    blocks = ds.six_blocks(corners)
    assert len(blocks) == 4
    for blk in blocks:
        s1, s2, s3, s4, s5, s6 = blk.bottoms
        assert blk.side == (s5, s6)
        assert lat.dist2(s5, s6) == 3 and lat.dist2(s1, s5) == 4
        apex = lat.add(s6, lat.LONG[blk.direction])
        assert tl.locate(apex, corners) == -1 and lat.dist2(apex, s5) == 3
        assert tl.locate(s4, corners) == 1
        # S2 left of S3 when looking along the spindle direction
        u = lat.LONG[blk.direction]
        assert -lat.cross(u, s2) < -lat.cross(u, s3)
        assert len(blk.tops()) == 6


def test_block_claims_hold():
    reports = ds.verify_block_claims()
    assert reports[ds.FIVE_BLOCK].ok and reports[ds.SIX_BLOCK].ok
    assert reports[ds.FIVE_BLOCK].blocks == 36
    assert reports[ds.SIX_BLOCK].blocks == 48


def test_single_discharge_conserves_and_bounds():
    ctx = ds.discharge_context(8)
    core_set = random_maximal_core_set(ctx.g, random.Random(2)).vertices
    I = complete_with_spindles(ctx.g, core_set, random.Random(3))
    assert is_independent(ctx.g, I)
    rep = ds.discharge(ctx, I, keep_ledger=True)
    assert rep.ok, rep.violations
    assert rep.ledger.total == rep.weight
    rep.ledger.check("test")
    assert F(-1, 2) <= rep.spindle_min <= rep.spindle_max <= 0
    for t, x in rep.excess.get("phase1", {}).items():
        assert x <= ds.PHASE1_CAP[t]


def test_verify_d8_samples_attains_caps():
    rep = ds.verify(8, samples=12, seed=1)
    assert rep.ok
    assert rep.failures == 0 and rep.runs == 12
    att = rep.attained()
    assert all(att[t] for t in ("T1", "T2", "T3", "T4", "T5", "T6"))
    data = rep.to_json()
    assert json.loads(json.dumps(data)) == data


def test_verify_jobs_do_not_change_result():
    a = ds.verify(5, samples=6, seed=4, jobs=1).to_json()
    b = ds.verify(5, samples=6, seed=4, jobs=2).to_json()
    assert a == b


def test_finite_bound_sequence():
    vals = [ds.finite_bound(d).value for d in range(4, 9)]
    assert vals[0] == F(3871, 1755) and vals[-1] == F(16651, 6773)
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert all(v < ds.ASYMPTOTIC for v in vals)


def test_independent_cap_beats_milp_oracle():
    # the cap must dominate the heaviest independent set, found here by a MILP
    ctx = ds.discharge_context(2)
    g = ctx.g
    w = np.array([float(v.weight * 10) for v in g.vertices])
    edges = g.edges()
    A = np.zeros((len(edges), g.n))
    for r, (u, v) in enumerate(edges):
        A[r, u] = A[r, v] = 1
    res = milp(-w, constraints=LinearConstraint(A, -np.inf, 1),
               integrality=np.ones(g.n), bounds=Bounds(0, 1))
    assert res.success
    assert -res.fun / 10 <= float(ds.finite_bound(2).cap) + 1e-9


def test_vertex_cap_at_least_retained():
    ctx = ds.discharge_context(6)
    for v in ctx.core:
        assert ds.vertex_cap(ctx, v) >= ds.RETAINED


def test_population_keys_are_reproducible():
    g = build_core(4)
    a = [sorted(s) for _, s, _ in ds.population(g, False, 5, 9, (0, 1))]
    b = [sorted(s) for _, s, _ in ds.population(g, False, 5, 9, (0, 1))]
    assert a == b
