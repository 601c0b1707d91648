"""Discharging checks on the spindled lattice graphs.

Two arguments are executed literally on concrete independent sets:

* the short argument on G_d (core weight 12, spindle weight 1, rules R1
  and R2), which caps every interior core vertex at 6;
* the three-phase argument on G'_d (core weight 31/5, spindle weight 1/2,
  rules R1 to R6 over the tiling of the core), which caps every tile at its
  target (21/5 per vertex) and every spindle at 0.

Charges live in a ChargeLedger; every rule moves charge between two
ledger entries, and the ledger total is re-checked after each rule.
Verdicts about tiles are only asserted for tiles far enough from the rim
of the core that every spindle, neighbour and block they rely on exists.
"""

from __future__ import annotations

import functools
import multiprocessing
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from . import lattice as lat
from . import tiling as tl
from .indsets import (bits, complete_with_spindles, max_weight_masks, maximal_independent_masks,
                      random_maximal_core_set)
from .lattice import Lat
from .udgraph import CORE, UDGraph, build_gd, build_gpd

F = Fraction

CORE_WEIGHT = F(31, 5)
SPINDLE_WEIGHT = F(1, 2)
RETAINED = F(21, 5)
R1_GIFT = F(1, 3)
R2_AMOUNT = F(1, 2)
R4_TAKE = F(3, 10)
R6_FIVE = F(1, 4)
R6_SIX = F(1, 8)
ASYMPTOTIC = F(76, 21)

# upper bounds on tile excess after phases 1 and 2
PHASE1_CAP = {"T1": F(-1, 5), "T2": F(7, 10), "T3": F(-3, 10), "T4": F(3, 5),
              "T5": F(2, 5), "T6": F(2, 5), "T7": F(0), "T8": F(0)}
PHASE2_CAP = {"T1": F(0), "T2": F(7, 10), "T3": F(0), "T4": F(0),
              "T5": F(0), "T6": F(2, 5), "T7": F(0), "T8": F(0)}

# tiles (and vertices) whose corners lie this far inside the rim get verdicts
INTERIOR_MARGIN = 4


class DischargeError(Exception):
    pass


class ConservationError(DischargeError):
    pass


def frac_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


# -- ledger ----------------------------------------------------------------------


class ChargeLedger:
    """Exact charges keyed by ("v", id), ("s", id) or ("t", index)."""

    PHASES = ("initial", "after_phase1", "after_phase2", "after_phase3")

    def __init__(self):
        self.charge: Dict[tuple, Fraction] = defaultdict(Fraction)
        self.total = F(0)
        self.phase = "initial"
        self.moves: Counter = Counter()

    def deposit(self, key: tuple, amount) -> None:
        self.charge[key] += amount
        self.total += amount

    def move(self, src: tuple, dst: tuple, amount, rule: str) -> None:
        self.charge[src] -= amount
        self.charge[dst] += amount
        self.moves[rule] += 1

    def check(self, after: str = "") -> None:
        s = sum(self.charge.values(), F(0))
        if s != self.total:
            raise ConservationError(f"charge total {s} != {self.total} after {after}")

    def __getitem__(self, key: tuple) -> Fraction:
        return self.charge.get(key, F(0))


def V(v: int) -> tuple:
    return ("v", v)


def S(s: int) -> tuple:
    return ("s", s)


def T(t: int) -> tuple:
    return ("t", t)


# -- the short argument on G_d ------------------------------------------------------


@dataclass(frozen=True)
class SimpleCase:
    """One line of the case analysis: start - given + core gifts + spindle receipts."""

    label: str
    start: int
    given: int
    core_in: int
    half: int
    full: int

    @property
    def total(self) -> Fraction:
        return self.start - self.given + self.core_in + F(self.half, 2) + self.full


SIMPLE_CASES = {
    "in_I": SimpleCase("in_I", 12, 6, 0, 0, 0),
    3: SimpleCase("3", 0, 0, 3, 6, 0),
    2: SimpleCase("2", 0, 0, 2, 4, 2),
    1: SimpleCase("1", 0, 0, 1, 2, 4),
    0: SimpleCase("0", 0, 0, 0, 0, 6),
}
SIMPLE_CAP = F(6)
SIMPLE_BOUND = F(12 + 9, 6)


@dataclass
class SimpleReport:
    final: Dict[int, Fraction]
    case_max: Dict[str, Fraction]
    case_count: Counter
    violations: List[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def _case_key(g: UDGraph, v: int, I) -> object:
    if v in I:
        return "in_I"
    return sum(1 for u in g.adj[v] if u in I and g.vertices[u].role == CORE)


def _core_nbrs(g: UDGraph, v: int) -> List[int]:
    return [u for u in g.adj[v] if g.vertices[u].role == CORE]


def _flanking(g: UDGraph, v: int, u: int) -> List[int]:
    """Neighbours of u at distance sqrt3 from v (v, u adjacent core vertices)."""
    pv = g.vertices[v].lattice
    out = []
    for w in _core_nbrs(g, u):
        if lat.dist2(g.vertices[w].lattice, pv) == 3:
            out.append(w)
    return out


def simple_discharge(g: UDGraph, I) -> SimpleReport:
    """Apply the two simple rules on G_d and check the per-vertex cap 6.

    R1: a core vertex in I gives 1 to each core neighbour.  R2: a spindle
    vertex in I splits its weight (its per-spindle portion, for merged
    vertices) equally between the incident core vertices of its spindle
    that are not in I.
    """
    I = frozenset(I)
    ledger = ChargeLedger()
    mult = g.spindle_multiplicity()
    for v in I:
        if g.vertices[v].role == CORE:
            ledger.deposit(V(v), g.vertices[v].weight)
    for s in g.spindles:
        for x in s.vertices:
            if x in I:
                ledger.deposit(S(s.id), g.vertices[x].weight / mult[x])
    ledger.check("initial")
    for u in sorted(I):
        if g.vertices[u].role != CORE:
            continue
        for v in _core_nbrs(g, u):
            ledger.move(V(u), V(v), 1, "R1")
    ledger.check("R1")
    received: Dict[int, Dict[int, Fraction]] = defaultdict(dict)
    violations = []
    for s in g.spindles:
        amount = ledger[S(s.id)]
        if not amount:
            continue
        ends = [x for x in (s.bottom, s.top) if x not in I]
        if not ends:
            violations.append(f"spindle {s.id} has a vertex in I but both ends in I")
            continue
        share = amount / len(ends)
        for x in ends:
            ledger.move(S(s.id), V(x), share, "R2")
            received[x][s.id] = received[x].get(s.id, F(0)) + share
    ledger.check("R2")
    ledger.phase = "after_phase1"

    inc = g.incident_spindles()
    final: Dict[int, Fraction] = {}
    case_max: Dict[str, Fraction] = {}
    case_count: Counter = Counter()
    for v in g.core_ids():
        nbrs = _core_nbrs(g, v)
        if len(nbrs) < 6 or len(inc.get(v, ())) < 6:
            continue
        c = ledger[V(v)]
        final[v] = c
        key = _case_key(g, v, I)
        case = SIMPLE_CASES[key]
        case_count[case.label] += 1
        if case.label not in case_max or c > case_max[case.label]:
            case_max[case.label] = c
        if c > case.total:
            violations.append(f"core vertex {v} ({g.vertices[v].lattice}) ends with {c} > {case.total}")
        if v not in I:
            # key observation: spindles shared with a flanking vertex send at most 1/2
            for u in nbrs:
                if u not in I:
                    continue
                for w in _flanking(g, v, u):
                    for sid in inc.get(v, ()):
                        s = g.spindles[sid]
                        if {s.bottom, s.top} == {v, w} and received[v].get(sid, 0) > F(1, 2):
                            violations.append(f"spindle {sid} sends more than 1/2 to {v}")
    return SimpleReport(final, case_max, case_count, violations)


# -- spindle status and blocks ------------------------------------------------------------


class SpindleStatus(Enum):
    TRIVIAL = "trivial"
    MISSING = "missing"
    PRESENT = "present"


def spindle_status(s, I) -> SpindleStatus:
    if s.bottom in I and s.top in I:
        return SpindleStatus.TRIVIAL
    if any(x in I for x in s.vertices):
        return SpindleStatus.PRESENT
    return SpindleStatus.MISSING


FIVE_BLOCK = "five_block"
SIX_BLOCK = "six_block"


@dataclass(frozen=True)
class SpindleBlock:
    """Spindles S_1.. of one block, given by bottom lattice point and direction.

    All spindles of a block are translates of one another: same direction,
    hence same rotation sense.
    """

    kind: str
    direction: int
    bottoms: Tuple[Lat, ...]
    side: Tuple[Lat, Lat]

    def tops(self) -> Tuple[Lat, ...]:
        return tuple(lat.add(b, lat.LONG[self.direction]) for b in self.bottoms)

    def to_json(self) -> dict:
        return {"kind": self.kind, "direction": self.direction,
                "bottoms": [list(b) for b in self.bottoms], "side": [list(p) for p in self.side]}


def _midpoint(p: Lat, q: Lat) -> Lat:
    return ((p[0] + q[0]) // 2, (p[1] + q[1]) // 2)


def _right_order(direction: int, pts: Iterable[Lat]) -> List[Lat]:
    """Sort points left to right as seen looking along the direction."""
    u = lat.LONG[direction]
    return sorted(pts, key=lambda p: -lat.cross(u, p))


def five_blocks(corners: Sequence[Lat]) -> List[SpindleBlock]:
    """The three 5-spindle blocks of a T2 with the given corners.

    For side pq with opposite corner r, every spindle points from its
    bottom towards r's side along the direction of r - midpoint(pq); the
    bottoms are p, the three side midpoints, and q, left to right.
    """
    cs = list(tl._ccw(corners))
    out = []
    for a in range(3):
        p, q, r = cs[a], cs[(a + 1) % 3], cs[(a + 2) % 3]
        k = lat.LONG.index(lat.sub(r, _midpoint(p, q)))
        bottoms = (p, _midpoint(p, r), _midpoint(p, q), _midpoint(q, r), q)
        out.append(SpindleBlock(FIVE_BLOCK, k, bottoms, (p, q)))
    return out


def _common_neighbours(p: Lat, q: Lat) -> List[Lat]:
    nq = set(lat.neighbors(q))
    return [x for x in lat.neighbors(p) if x in nq]


def six_blocks(corners: Sequence[Lat]) -> List[SpindleBlock]:
    """The four 6-spindle blocks of a T6 (two crossing each short side).

    For short side {S5, S6}: S6's spindle points at the apex of the
    equilateral sqrt3 triangle erected outside on that side; S4 is the
    common neighbour of S5 and S6 inside the tile; S1 is the corner joined
    to S5 by a long side; S2, S3 are the common neighbours of S1 and S4.
    """
    cs = list(tl._ccw(corners))
    out = []
    for a in range(4):
        x, y = cs[a], cs[(a + 1) % 4]
        if lat.dist2(x, y) != 3:
            continue
        apexes = [p for p in _common_sqrt3(x, y) if tl.locate(p, cs) == -1]
        inner = [p for p in _common_neighbours(x, y) if tl.locate(p, cs) == 1]
        if len(apexes) != 1 or len(inner) != 1:
            raise DischargeError(f"unexpected T6 geometry {cs}")
        for s5, s6 in ((x, y), (y, x)):
            k = lat.LONG.index(lat.sub(apexes[0], s6))
            s1 = next(c for c in cs if c not in (s5, s6) and lat.dist2(c, s5) == 4)
            s4 = inner[0]
            s2, s3 = _right_order(k, _common_neighbours(s1, s4))
            out.append(SpindleBlock(SIX_BLOCK, k, (s1, s2, s3, s4, s5, s6), (s5, s6)))
    return out


def _common_sqrt3(p: Lat, q: Lat) -> List[Lat]:
    return [lat.add(p, u) for u in lat.LONG if lat.dist2(lat.add(p, u), q) == 3]


def tile_blocks(tile) -> List[SpindleBlock]:
    if tile.type == "T2":
        return five_blocks(tile.corners)
    if tile.type == "T6":
        return six_blocks(tile.corners)
    return []


# -- the three-phase argument on G'_d --------------------------------------------------------


class DischargeContext:
    """G'_d with lookup tables shared by every run at radius d."""

    def __init__(self, d: int):
        self.d = d
        self.g = build_gpd(d)
        g = self.g
        self.pos = g.lattice_index
        self.core = g.core_ids()
        self.core_nbrs = {v: _core_nbrs(g, v) for v in self.core}
        self.spindle_at: Dict[Tuple[Lat, int], int] = {}
        self.incident: Dict[int, List[Tuple[int, int]]] = defaultdict(list)  # v -> (spindle, direction from v)
        for s in g.spindles:
            self.spindle_at[(g.vertices[s.bottom].lattice, s.direction)] = s.id
            self.incident[s.bottom].append((s.id, s.direction))
            self.incident[s.top].append((s.id, (s.direction + 3) % 6))
        mult = g.spindle_multiplicity()
        self.portion = {x: g.vertices[x].weight / mult[x] for x in mult}
        self.tiling_ctx = tl.context(d)
        r = max(d - INTERIOR_MARGIN, 0)
        self.deep_norm = r * r if d >= INTERIOR_MARGIN else -1

    def deep(self, p: Lat) -> bool:
        return lat.norm(p) <= self.deep_norm

    def full(self, v: int) -> bool:
        return len(self.core_nbrs[v]) == 6 and len(self.incident[v]) == 12


@functools.lru_cache(maxsize=8)
def discharge_context(d: int) -> DischargeContext:
    return DischargeContext(d)


@dataclass
class DischargeReport:
    d: int
    size: int
    weight: Fraction
    counts: Dict[str, int]
    excess: Dict[str, Dict[str, Fraction]]  # phase -> type -> max over interior tiles
    spindle_min: Fraction
    spindle_max: Fraction
    violations: List[str]
    diagnostics: Counter
    ledger: Optional[ChargeLedger] = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"d": self.d, "size": self.size, "weight": frac_json(self.weight),
                "counts": self.counts,
                "max_excess": {ph: {t: frac_json(x) for t, x in sorted(m.items())}
                               for ph, m in self.excess.items()},
                "spindle_charge": {"min": frac_json(self.spindle_min), "max": frac_json(self.spindle_max)},
                "violations": list(self.violations),
                "diagnostics": dict(sorted(self.diagnostics.items()))}


def _tile_geometry(tiling):
    """Point roles and side incidence for a tiling."""
    roles: Dict[Lat, list] = defaultdict(list)
    sides: Dict[FrozenSet[Lat], List[int]] = defaultdict(list)
    for ti, t in enumerate(tiling.tiles):
        for p in t.interior:
            roles[p].append(("in", ti, None))
        for a, b in t.sides():
            sides[frozenset((a, b))].append(ti)
            if lat.dist2(a, b) == 4:
                m = lat.UNIT.index(((b[0] - a[0]) // 2, (b[1] - a[1]) // 2))
                roles[_midpoint(a, b)].append(("bd", ti, m))
    return roles, sides


class DischargeRun:
    """One independent set of G'_d taken through phases 1 to 3.

    I must be independent in G'_d with a maximal core part.  Call phase1,
    phase2, phase3 in order (or run()); the ledger is checked after every
    rule and per-tile excess is snapshotted after phases 1 and 2.
    """

    def __init__(self, ctx: DischargeContext, I, tiling=None):
        self.ctx = ctx
        g = self.g = ctx.g
        self.I = frozenset(I)
        self.core_I = frozenset(v for v in self.I if g.vertices[v].role == CORE)
        if tiling is None:
            tiling = tl.build_tiling(g, self.core_I, ctx=ctx.tiling_ctx)
        self.tiling = tiling
        self.tiles = tiling.tiles
        self.violations: List[str] = []
        self.diag: Counter = Counter()
        self.pts = {v: g.vertices[v].lattice for v in ctx.core}
        self.roles, self.sides = _tile_geometry(tiling)
        self.target = []
        for t in self.tiles:
            i_t = sum(1 for p in t.interior if p in ctx.pos)
            b_t = sum(1 for p in t.boundary if p in ctx.pos)
            self.target.append(RETAINED * (i_t + F(b_t, 2)))
        self.interior = [all(ctx.deep(c) for c in t.corners) for t in self.tiles]

        L = self.ledger = ChargeLedger()
        for v in self.core_I:
            L.deposit(V(v), g.vertices[v].weight)
        self.status = {}
        for s in g.spindles:
            self.status[s.id] = spindle_status(s, self.I)
            amt = sum((ctx.portion[x] for x in s.vertices if x in self.I), F(0))
            if amt:
                L.deposit(S(s.id), amt)
        L.check("initial")
        self.weight = L.total
        self.excess1: List[Fraction] = []
        self.excess2: List[Fraction] = []
        self.in_five: Counter = Counter()
        self.in_six: Counter = Counter()

    def excess(self, ti: int) -> Fraction:
        return self.ledger[T(ti)] - self.target[ti]

    def phase1(self) -> None:
        ctx, g, L, I, core_I = self.ctx, self.g, self.ledger, self.I, self.core_I
        r1: Dict[int, Fraction] = defaultdict(Fraction)
        for u in sorted(core_I):
            for v in ctx.core_nbrs[u]:
                L.move(V(u), V(v), R1_GIFT, "R1")
                r1[v] += R1_GIFT
        L.check("R1")
        recv: Dict[int, List[Tuple[int, int, Fraction]]] = defaultdict(list)
        for s in g.spindles:
            if self.status[s.id] is SpindleStatus.TRIVIAL:
                continue
            ends = [(x, k) for x, k in ((s.bottom, s.direction), (s.top, (s.direction + 3) % 6))
                    if x not in I]
            share = R2_AMOUNT / len(ends)
            for x, k in ends:
                L.move(S(s.id), V(x), share, "R2")
                recv[x].append((s.id, k, share))
        L.check("R2")
        self._key_observation(recv)

        for v in ctx.core:
            if v in core_I:
                continue
            p = self.pts[v]
            rs = self.roles.get(p, [])
            kinds = sorted(r[0] for r in rs)
            if kinds == ["in"]:
                L.move(V(v), T(rs[0][1]), L[V(v)], "R3")
            elif kinds in (["bd"], ["bd", "bd"]):
                if len(kinds) == 1:
                    self.diag["r3_single_tile_border"] += 1
                for _, ti, m in rs:
                    L.move(V(v), T(ti), r1[v] / 2, "R3")
                    # the three directions whose perpendicular representative points into ti
                    parity = (m + 1) % 2
                    for sid, k, amt in recv[v]:
                        if lat.cross(lat.UNIT[m], lat.LONG[k]) == 0:
                            raise DischargeError("spindle direction parallel to a tile border")
                        if k % 2 == parity:
                            L.move(V(v), T(ti), amt, "R3")
            else:
                self.diag["r3_unassigned"] += 1
                if ctx.deep(p):
                    self.violations.append(f"core vertex {p} has tile roles {kinds}")
            if L[V(v)] and ctx.deep(p):
                self.violations.append(f"core vertex {p} keeps {L[V(v)]} after R3")
        L.check("R3")
        L.phase = "after_phase1"
        self.excess1 = [self.excess(ti) for ti in range(len(self.tiles))]

    def _key_observation(self, recv) -> None:
        g, core_I = self.g, self.core_I
        for v in self.ctx.core:
            if v in core_I:
                continue
            for u in self.ctx.core_nbrs[v]:
                if u not in core_I:
                    continue
                for w in _flanking(g, v, u):
                    if w in core_I:
                        self.violations.append(f"flanking vertex {self.pts[w]} of {self.pts[u]} in I")
                    for sid, k, amt in recv[v]:
                        s = g.spindles[sid]
                        if {s.bottom, s.top} == {v, w} and amt > F(1, 4):
                            self.violations.append(f"key observation: spindle {sid} sends {amt} to {self.pts[v]}")

    def phase2(self) -> None:
        L, tiles, sides = self.ledger, self.tiles, self.sides
        for ti, t in enumerate(tiles):
            if t.type != "T3":
                continue
            long_sides = [(a, b) for a, b in t.sides() if lat.dist2(a, b) == 7]
            if len(long_sides) != 1:
                raise DischargeError(f"T3 without a unique long side: {t.corners}")
            nb = [x for x in sides[frozenset(long_sides[0])] if x != ti]
            if not nb:
                self.diag["r4_no_neighbour"] += 1
                if self.interior[ti]:
                    self.violations.append(f"interior T3 at {t.corners} has no tile on its long side")
                continue
            self.diag["r4_from_" + tiles[nb[0]].type] += 1
            L.move(T(nb[0]), T(ti), R4_TAKE, "R4")
        L.check("R4")
        for ti, t in enumerate(tiles):
            if t.type != "T1":
                continue
            e = self.excess(ti)
            if e >= 0:
                continue
            t6 = _adjacent_of_type(ti, tiles, sides, "T6")
            if not t6:
                # nothing to collect: the T1 keeps its deficit
                self.diag["r5_deficit_without_t6"] += 1
                continue
            self.diag[f"r5_t6_neighbours_{len(t6)}"] += 1
            for x in t6:
                L.move(T(x), T(ti), -e / len(t6), "R5")
        L.check("R5")
        L.phase = "after_phase2"
        self.excess2 = [self.excess(ti) for ti in range(len(tiles))]

    def phase3(self) -> None:
        ctx, L = self.ctx, self.ledger
        for ti, t in enumerate(self.tiles):
            blocks = tile_blocks(t)
            if not blocks:
                continue
            gift = R6_FIVE if t.type == "T2" else R6_SIX
            into = self.in_five if t.type == "T2" else self.in_six
            block_status = []
            for blk in blocks:
                sids = [ctx.spindle_at.get((b, blk.direction)) for b in blk.bottoms]
                if any(s is None for s in sids):
                    self.diag["r6_incomplete_block"] += 1
                sts = [self.status[s] if s is not None else None for s in sids]
                block_status.append((blk, sids, sts))
                for s, st in zip(sids, sts):
                    if st is SpindleStatus.MISSING:
                        L.move(T(ti), S(s), gift, "R6")
                        into[s] += 1
                if self.interior[ti] and all(s is not None for s in sids):
                    _check_block(blk, sts, self.violations)
                    if any(st is SpindleStatus.TRIVIAL for st in sts):
                        self.diag[f"{blk.kind}_with_trivial"] += 1
            if t.type == "T6" and self.interior[ti]:
                _check_t6_borders(ti, self.tiles, self.sides, block_status, self.violations, self.diag)
        L.check("R6")
        L.phase = "after_phase3"

    def run(self) -> "DischargeRun":
        self.phase1()
        self.phase2()
        self.phase3()
        return self

    def report(self, keep_ledger: bool = False) -> DischargeReport:
        g, L, tiles = self.g, self.ledger, self.tiles
        violations = list(self.violations)
        for s in set(self.in_five) | set(self.in_six):
            a, b = self.in_five[s], self.in_six[s]
            self.diag[f"missing_spindle_blocks_{a}x5_{b}x6"] += 1
            if a * R6_FIVE + b * R6_SIX > R2_AMOUNT:
                violations.append(f"spindle {s} lies in {a} five-blocks and {b} six-blocks")
        charges = [L[S(s.id)] for s in g.spindles]
        for s, c in zip(g.spindles, charges):
            if c > 0:
                violations.append(f"spindle {s.id} ends with {c}")
        for v in self.core_I:
            if self.ctx.full(v) and L[V(v)] != RETAINED:
                violations.append(f"I-vertex {self.pts[v]} keeps {L[V(v)]}")
        maxes: Dict[str, Dict[str, Fraction]] = {ph: {} for ph in ("phase1", "phase2", "final")}
        for ti, t in enumerate(tiles):
            if not self.interior[ti]:
                continue
            fin = self.excess(ti)
            for ph, x in (("phase1", self.excess1[ti]), ("phase2", self.excess2[ti]), ("final", fin)):
                cur = maxes[ph].get(t.type)
                if cur is None or x > cur:
                    maxes[ph][t.type] = x
            if self.excess1[ti] > PHASE1_CAP[t.type]:
                violations.append(f"{t.type} at {t.corners}: phase-1 excess {self.excess1[ti]} > {PHASE1_CAP[t.type]}")
            if self.excess2[ti] > PHASE2_CAP[t.type]:
                violations.append(f"{t.type} at {t.corners}: phase-2 excess {self.excess2[ti]} > {PHASE2_CAP[t.type]}")
            if fin > 0:
                violations.append(f"{t.type} at {t.corners}: final excess {fin}")
        counts = Counter(t.type for t in tiles)
        return DischargeReport(self.ctx.d, len(self.I), self.weight,
                               {n: counts.get(n, 0) for n in tl.TILE_NAMES}, maxes,
                               min(charges, default=F(0)), max(charges, default=F(0)),
                               violations, self.diag, L if keep_ledger else None)


def _adjacent_of_type(ti, tiles, sides, kind: str) -> List[int]:
    return sorted({x for a, b in tiles[ti].sides() for x in sides[frozenset((a, b))]
                   if x != ti and tiles[x].type == kind})


def discharge(ctx: DischargeContext, I, tiling=None, keep_ledger: bool = False) -> DischargeReport:
    """Run phases 1 to 3 for one independent set of G'_d and collect verdicts."""
    return DischargeRun(ctx, I, tiling).run().report(keep_ledger)


def _check_block(blk: SpindleBlock, sts, violations: List[str]) -> None:
    missing = sum(1 for st in sts if st is SpindleStatus.MISSING)
    trivial = [i for i, st in enumerate(sts) if st is SpindleStatus.TRIVIAL]
    if blk.kind == FIVE_BLOCK:
        if not missing:
            violations.append(f"five-block {blk.bottoms} dir {blk.direction} has no missing spindle")
    else:
        if any(i < 4 for i in trivial):
            violations.append(f"six-block {blk.bottoms}: trivial spindle outside S5, S6")
        if not missing and len(trivial) < 2:
            violations.append(f"six-block {blk.bottoms} dir {blk.direction}: no missing, {len(trivial)} trivial")


def _check_t6_borders(ti, tiles, sides, block_status, violations: List[str], diag: Counter) -> None:
    """Border statements for a T6: trivial S6 means a T1 across that short
    side; S5 also trivial bounds that T1's T6 neighbours by 2; both blocks
    on a side fully trivial bounds them by 1."""
    by_side: Dict[FrozenSet[Lat], list] = defaultdict(list)
    for blk, sids, sts in block_status:
        by_side[frozenset(blk.side)].append(sts)
    for side, entries in by_side.items():
        others = [x for x in sides[side] if x != ti]
        across = others[0] if others else None
        n_t6 = None
        if across is not None and tiles[across].type == "T1":
            n_t6 = len(_adjacent_of_type(across, tiles, sides, "T6"))
        both = 0
        for sts in entries:
            if sts[5] is not SpindleStatus.TRIVIAL:
                continue
            diag["trivial_s6"] += 1
            if n_t6 is None:
                violations.append(f"T6 {tiles[ti].corners}: trivial S6 without a T1 across {sorted(side)}")
                continue
            if sts[4] is SpindleStatus.TRIVIAL:
                both += 1
                diag["trivial_s5_s6"] += 1
                if n_t6 > 2:
                    violations.append(f"T1 across {sorted(side)} borders {n_t6} copies of T6")
        if both == 2:
            diag["four_trivial_on_side"] += 1
            if n_t6 != 1:
                violations.append(f"T1 across {sorted(side)} borders {n_t6} copies of T6 with four trivial spindles")


# -- block claims -------------------------------------------------------------------------------


@dataclass
class BlockClaimReport:
    kind: str
    blocks: int
    patterns: int
    counterexamples: List[dict]

    @property
    def ok(self) -> bool:
        return self.blocks > 0 and not self.counterexamples

    def to_json(self) -> dict:
        return {"kind": self.kind, "blocks": self.blocks, "patterns": self.patterns,
                "counterexamples": self.counterexamples[:10]}


def _independent_subsets(masks: Sequence[int]) -> Iterator[int]:
    """Every independent subset of a small graph given by neighbour masks."""
    n = len(masks)

    def rec(i: int, chosen: int, banned: int) -> Iterator[int]:
        if i == n:
            yield chosen
            return
        yield from rec(i + 1, chosen, banned)
        if not (banned >> i) & 1:
            yield from rec(i + 1, chosen | (1 << i), banned | masks[i])

    yield from rec(0, 0, 0)


def _placed_corners(name: str, iso: int, anchor: Lat) -> Tuple[Lat, ...]:
    cs = [tl._apply(iso, p) for p in tl.TEMPLATES[name].corners]
    c0 = cs[0]
    return tuple(lat.add(lat.sub(c, c0), anchor) for c in cs)


def verify_block_claims(d: int = 5, kinds=(FIVE_BLOCK, SIX_BLOCK)) -> Dict[str, BlockClaimReport]:
    """Exhaustively check the block statements over all local I-patterns.

    The tile is placed near the centre of G'_d in each of the 12 lattice
    isometries.  Its corners are in I and its other lattice points are
    not; every spindle vertex of the block and every other diamond vertex
    of its spindles is free, subject only to independence.  Extra vertices
    of the whole graph could only remove patterns, so this covers every
    independent set.  Five-blocks must contain a missing spindle; six-blocks
    must contain a missing spindle or two trivial ones (trivial only at
    S5, S6).
    """
    ctx = discharge_context(d)
    g = ctx.g
    out = {}
    for kind in kinds:
        name = "T2" if kind == FIVE_BLOCK else "T6"
        blocks = patterns = 0
        bad: List[dict] = []
        for iso in range(12):
            corners = _placed_corners(name, iso, (0, 0))
            tpl_bnd, tpl_in = tl.lattice_points_of(corners)
            blks = five_blocks(corners) if kind == FIVE_BLOCK else six_blocks(corners)
            for blk in blks:
                sids = [ctx.spindle_at.get((b, blk.direction)) for b in blk.bottoms]
                if any(s is None for s in sids):
                    raise DischargeError(f"block {blk.bottoms} does not fit in G'_{d}")
                spindles = [g.spindles[s] for s in sids]
                fixed_in = {ctx.pos[c] for c in corners}
                fixed_out = {ctx.pos[p] for p in tpl_bnd + tpl_in if p in ctx.pos}
                free = set()
                for s in spindles:
                    free.update(s.vertices)
                    free.update(s.diamond)
                free -= fixed_in | fixed_out
                free = sorted(x for x in free if not g.adj[x] & fixed_in)
                local = {x: i for i, x in enumerate(free)}
                masks = [sum(1 << local[y] for y in g.adj[x] if y in local) for x in free]
                blocks += 1
                for m in _independent_subsets(masks):
                    patterns += 1
                    I = set(fixed_in)
                    I.update(free[i] for i in range(len(free)) if (m >> i) & 1)
                    sts = [spindle_status(s, I) for s in spindles]
                    errs: List[str] = []
                    _check_block(blk, sts, errs)
                    if errs:
                        bad.append({"iso": iso, "block": blk.to_json(),
                                    "status": [st.value for st in sts]})
        out[kind] = BlockClaimReport(kind, blocks, patterns, bad)
    return out


# -- populations and bounds ------------------------------------------------------------------------


def population(g: UDGraph, exhaustive: bool, samples: int, seed: int,
               part: Tuple[int, int] = (0, 1)) -> Iterator[Tuple[tuple, FrozenSet[int], random.Random]]:
    """(key, maximal core set, generator for the spindle completion).

    Every set gets its own generator seeded from (seed, key), so a run
    split into parts sees exactly the sets and completions of an unsplit
    run.  Samples are keyed by index, enumerated sets by their mask.
    """
    if exhaustive:
        ids, masks = g.bitmasks(g.core_ids())
        for m in maximal_independent_masks(masks, part):
            yield (m,), frozenset(ids[i] for i in bits(m)), random.Random(f"{seed}:{m}")
        return
    for i in range(part[0], samples, part[1]):
        rng = random.Random(f"{seed}:{i}")
        yield (i,), random_maximal_core_set(g, rng).vertices, rng


def _run_parts(worker, args: tuple, jobs: int):
    """worker(*args, part) over `jobs` parts, merged in part order."""
    if jobs <= 1:
        return worker(*args, (0, 1))
    with multiprocessing.Pool(jobs) as pool:
        tallies = pool.starmap(worker, [args + ((k, jobs),) for k in range(jobs)])
    out = tallies[0]
    for t in tallies[1:]:
        out.merge(t)
    return out


def vertex_cap(ctx: DischargeContext, v: int) -> Fraction:
    """Largest charge vertex v can hold after R1 and R2, over all I."""
    nbrs = ctx.core_nbrs[v]
    local = {u: i for i, u in enumerate(nbrs)}
    masks = [sum(1 << local[w] for w in ctx.g.adj[u] if w in local) for u in nbrs]
    alpha, _ = max_weight_masks(masks, [1] * len(nbrs))
    as_member = CORE_WEIGHT - R1_GIFT * len(nbrs)
    as_other = R1_GIFT * max(alpha, 0) + R2_AMOUNT * len(ctx.incident[v])
    return max(as_member, as_other)


@dataclass
class FiniteBound:
    d: int
    total_weight: Fraction
    cap: Fraction
    deep: int
    shallow: int

    @property
    def value(self) -> Fraction:
        return self.total_weight / self.cap

    def to_json(self) -> dict:
        return {"d": self.d, "finite_bound": frac_json(self.value),
                "total_weight": frac_json(self.total_weight), "independent_cap": frac_json(self.cap),
                "deep_vertices": self.deep, "rim_vertices": self.shallow}


def finite_bound(d: int) -> FiniteBound:
    """total weight of G'_d over a cap on the weight of any independent set.

    Deep core vertices (at least INTERIOR_MARGIN inside the rim) are
    charged the retained 21/5 that the tile claims give them on average;
    every other core vertex is charged the most it could hold after R1 and
    R2.  The quotient is below 76/21 and tends to it as d grows.
    """
    ctx = discharge_context(d)
    cap = F(0)
    deep = 0
    for v in ctx.core:
        if ctx.deep(ctx.g.vertices[v].lattice):
            cap += RETAINED
            deep += 1
        else:
            cap += vertex_cap(ctx, v)
    return FiniteBound(d, ctx.g.total_weight(), cap, deep, len(ctx.core) - deep)


@dataclass
class Tally:
    """Order-independent aggregate over a population of runs."""

    runs: int = 0
    failures: int = 0
    counts: Counter = field(default_factory=Counter)
    excess: Dict[str, Dict[str, Fraction]] = field(default_factory=dict)
    diagnostics: Counter = field(default_factory=Counter)
    spindle_min: Optional[Fraction] = None
    spindle_max: Optional[Fraction] = None
    max_weight: Fraction = F(0)
    size_min: Optional[int] = None
    size_max: int = 0
    first_failures: List[Tuple[tuple, dict]] = field(default_factory=list)

    KEEP = 5

    def fail(self, key: tuple, info: dict) -> None:
        self.failures += 1
        self.first_failures = sorted(self.first_failures + [(key, info)])[: self.KEEP]

    def add(self, size: int, rep: DischargeReport) -> None:
        self.counts.update(rep.counts)
        _merge_max(self.excess, rep.excess)
        self.diagnostics.update(rep.diagnostics)
        self.spindle_min = _opt(min, self.spindle_min, rep.spindle_min)
        self.spindle_max = _opt(max, self.spindle_max, rep.spindle_max)
        self.max_weight = max(self.max_weight, rep.weight)
        self.size_min = _opt(min, self.size_min, size)
        self.size_max = max(self.size_max, size)

    def merge(self, other: "Tally") -> None:
        self.runs += other.runs
        self.failures += other.failures
        self.counts.update(other.counts)
        _merge_max(self.excess, other.excess)
        self.diagnostics.update(other.diagnostics)
        self.spindle_min = _opt(min, self.spindle_min, other.spindle_min)
        self.spindle_max = _opt(max, self.spindle_max, other.spindle_max)
        self.max_weight = max(self.max_weight, other.max_weight)
        self.size_min = _opt(min, self.size_min, other.size_min)
        self.size_max = max(self.size_max, other.size_max)
        self.first_failures = sorted(self.first_failures + other.first_failures)[: self.KEEP]


def _opt(f, a, b):
    if a is None:
        return b
    if b is None:
        return a
    return f(a, b)


def _merge_max(into: Dict[str, Dict[str, Fraction]], new: Dict[str, Dict[str, Fraction]]) -> None:
    for ph, m in new.items():
        cur = into.setdefault(ph, {})
        for t, x in m.items():
            if t not in cur or x > cur[t]:
                cur[t] = x


def _verify_part(d: int, exhaustive: bool, samples: int, seed: int, part: Tuple[int, int]) -> Tally:
    ctx = discharge_context(d)
    tally = Tally()
    for key, core_set, rng in population(ctx.g, exhaustive, samples, seed, part):
        I = complete_with_spindles(ctx.g, core_set, rng)
        tally.runs += 1
        try:
            rep = discharge(ctx, I)
        except (tl.TilingError, DischargeError) as exc:
            tally.fail(key, {"core_set": sorted(core_set), "error": str(exc)})
            continue
        tally.add(len(core_set), rep)
        if not rep.ok:
            tally.fail(key, {"core_set": sorted(core_set), "violations": rep.violations[:10]})
    return tally


@dataclass
class VerifyReport:
    d: int
    mode: dict
    tally: Tally
    bound: FiniteBound

    @property
    def runs(self) -> int:
        return self.tally.runs

    @property
    def failures(self) -> int:
        return self.tally.failures

    @property
    def weight_within_cap(self) -> bool:
        return self.tally.max_weight <= self.bound.cap

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.weight_within_cap

    def attained(self) -> Dict[str, bool]:
        ex = self.tally.excess.get("phase1", {})
        return {t: ex.get(t) == PHASE1_CAP[t] for t in tl.TILE_NAMES}

    def to_json(self) -> dict:
        t = self.tally
        return {
            "d": self.d, **self.mode, "runs": t.runs, "failures": t.failures, "ok": self.ok,
            "I_size": {"min": t.size_min or 0, "max": t.size_max},
            "tile_counts": {n: t.counts.get(n, 0) for n in tl.TILE_NAMES},
            "max_excess": {ph: {n: frac_json(x) for n, x in sorted(m.items())}
                           for ph, m in sorted(t.excess.items())},
            "phase1_cap": {n: frac_json(x) for n, x in PHASE1_CAP.items()},
            "phase1_cap_attained": self.attained(),
            "spindle_charge": {"min": frac_json(t.spindle_min or 0), "max": frac_json(t.spindle_max or 0)},
            "diagnostics": dict(sorted(t.diagnostics.items())),
            "max_I_weight": frac_json(t.max_weight),
            "weight_within_cap": self.weight_within_cap,
            **self.bound.to_json(),
            "asymptotic": frac_json(ASYMPTOTIC),
            "first_failures": [info for _, info in t.first_failures],
        }

    def csv_row(self) -> Dict[str, object]:
        t = self.tally
        row: Dict[str, object] = {"d": self.d, "runs": t.runs, "failures": t.failures,
                                  "finite_bound": str(self.bound.value)}
        for n in tl.TILE_NAMES:
            row[f"count_{n}"] = t.counts.get(n, 0)
            x = t.excess.get("phase1", {}).get(n)
            row[f"phase1_max_{n}"] = "" if x is None else str(x)
        return row


def verify(d: int, exhaustive: bool = False, samples: int = 0, seed: int = 0,
           jobs: int = 1) -> VerifyReport:
    """Tiling plus three-phase discharging over a population of maximal core sets."""
    tally = _run_parts(_verify_part, (d, exhaustive, samples, seed), jobs)
    mode = {"exhaustive": True} if exhaustive else {"exhaustive": False, "samples": samples, "seed": seed}
    return VerifyReport(d, mode, tally, finite_bound(d))


@dataclass
class BoundReport:
    asymptotic: Fraction
    finite: Dict[int, Fraction]
    verdicts: Dict[int, bool]
    block_claims: bool

    @property
    def nondecreasing(self) -> bool:
        vals = [self.finite[d] for d in sorted(self.finite)]
        return all(a <= b for a, b in zip(vals, vals[1:]))

    @property
    def ok(self) -> bool:
        return self.block_claims and all(self.verdicts.values())

    def to_json(self) -> dict:
        return {"asymptotic": frac_json(self.asymptotic), "ok": self.ok,
                "block_claims": self.block_claims,
                "finite_bound": {str(d): frac_json(x) for d, x in sorted(self.finite.items())},
                "verdicts": {str(d): ok for d, ok in sorted(self.verdicts.items())},
                "nondecreasing": self.nondecreasing}


def compute_bound(ds: Sequence[int], samples: int = 100, seed: int = 0,
                  exhaustive: bool = False, jobs: int = 1) -> BoundReport:
    """Asymptotic 76/21 (valid once every verdict is green) and finite bounds.

    Any failed verdict poisons the asymptotic value: it is then reported
    as None.
    """
    blocks = all(r.ok for r in verify_block_claims().values())
    verdicts = {}
    finite = {}
    for d in ds:
        rep = verify(d, exhaustive=exhaustive, samples=samples, seed=seed, jobs=jobs)
        verdicts[d] = rep.ok
        finite[d] = rep.bound.value
    # per interior vertex: its own weight plus a share of 18 spindle vertices
    asym = (CORE_WEIGHT + SPINDLE_WEIGHT * 18) / RETAINED
    rep = BoundReport(asym, finite, verdicts, blocks)
    if not rep.ok:
        rep.asymptotic = None
    return rep


# -- the short argument over populations -------------------------------------------------------


@dataclass
class SimpleTally:
    runs: int = 0
    case_max: Dict[str, Fraction] = field(default_factory=dict)
    case_count: Counter = field(default_factory=Counter)
    violations: List[Tuple[tuple, str]] = field(default_factory=list)

    KEEP = 10

    def merge(self, other: "SimpleTally") -> None:
        self.runs += other.runs
        for k, x in other.case_max.items():
            if k not in self.case_max or x > self.case_max[k]:
                self.case_max[k] = x
        self.case_count.update(other.case_count)
        self.violations = sorted(self.violations + other.violations)[: self.KEEP]


@functools.lru_cache(maxsize=4)
def _gd(d: int) -> UDGraph:
    return build_gd(d)


def _simple_part(d: int, exhaustive: bool, samples: int, seed: int, part: Tuple[int, int]) -> SimpleTally:
    g = _gd(d)
    tally = SimpleTally()
    for key, core_set, rng in population(g, exhaustive, samples, seed, part):
        rep = simple_discharge(g, complete_with_spindles(g, core_set, rng))
        tally.runs += 1
        other = SimpleTally(0, rep.case_max, rep.case_count, [(key, v) for v in rep.violations])
        tally.merge(other)
    return tally


@dataclass
class SimpleSummary:
    d: int
    mode: dict
    tally: SimpleTally

    @property
    def ok(self) -> bool:
        t = self.tally
        return t.runs > 0 and not t.violations and all(x <= SIMPLE_CAP for x in t.case_max.values())

    def to_json(self) -> dict:
        t = self.tally
        return {"d": self.d, **self.mode, "runs": t.runs, "ok": self.ok,
                "case_totals": {c.label: frac_json(c.total) for c in SIMPLE_CASES.values()},
                "case_max": {k: frac_json(x) for k, x in sorted(t.case_max.items())},
                "case_count": dict(sorted(t.case_count.items())),
                "cap": frac_json(SIMPLE_CAP), "bound": frac_json(SIMPLE_BOUND),
                "violations": [v for _, v in t.violations]}


def simple_verify(d: int, exhaustive: bool = False, samples: int = 0, seed: int = 0,
                  jobs: int = 1) -> SimpleSummary:
    """The short argument over a population of maximal core sets of G_d."""
    tally = _run_parts(_simple_part, (d, exhaustive, samples, seed), jobs)
    mode = {"exhaustive": True} if exhaustive else {"exhaustive": False, "samples": samples, "seed": seed}
    return SimpleSummary(d, mode, tally)
