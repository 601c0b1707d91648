"""Unit-distance graphs with exact embeddings.

Builders for the Moser spindle, the Golomb graph, triangular-lattice cores,
cores with spindles attached in three or six directions, and the 57-vertex
Fisher-Ullman graph.  Every builder finishes by adding *all* pairs at exact
distance 1, so accidental unit distances are edges too.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import lattice as lat
from .exactnum import (
    ONE, Orientation, Point, QuadExt, RotationSpec, dist2,
    lattice_point, point, rotate, rotate_by,
)

CORE = "core"
SPINDLE = "spindle"

THREE_DIRECTIONS = "three_directions"
SIX_DIRECTIONS = "six_directions"


@dataclass
class Vertex:
    id: int
    point: Point
    role: str
    weight: Fraction
    lattice: Optional[lat.Lat] = None


@dataclass(frozen=True)
class Spindle:
    """A Moser spindle hung on a diamond of the core.

    ``vertices`` holds spindle vertices 1, 2, 3: vertices 1 and 2 are the
    images of the diamond's side vertices (distance 1 from the bottom),
    vertex 3 is the image of the top (distance sqrt3 from the bottom).
    """

    id: int
    bottom: int
    top: int
    sides: Tuple[int, int]
    vertices: Tuple[int, int, int]
    direction: int
    orientation: Orientation

    @property
    def diamond(self) -> Tuple[int, int, int, int]:
        return (self.bottom, self.top) + self.sides


@dataclass
class UDGraph:
    name: str
    vertices: List[Vertex]
    adj: List[set]
    spindles: List[Spindle] = field(default_factory=list)
    radius: Optional[int] = None
    center: Optional[Point] = None
    mode: Optional[str] = None
    merges: int = 0
    # lattice coordinate -> vertex id, for lattice-built cores
    lattice_index: Dict[lat.Lat, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.vertices)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def weights(self) -> List[Fraction]:
        return [v.weight for v in self.vertices]

    def total_weight(self) -> Fraction:
        return sum((v.weight for v in self.vertices), Fraction(0))

    def core_ids(self) -> List[int]:
        return [v.id for v in self.vertices if v.role == CORE]

    def spindle_vertex_ids(self) -> List[int]:
        return [v.id for v in self.vertices if v.role == SPINDLE]

    def set_weights(self, core=None, spindle=None) -> "UDGraph":
        """Assign uniform weights by role; merged spindle vertices get the sum."""
        mult = self.spindle_multiplicity()
        for v in self.vertices:
            if v.role == CORE and core is not None:
                v.weight = Fraction(core)
            elif v.role == SPINDLE and spindle is not None:
                v.weight = Fraction(spindle) * mult.get(v.id, 1)
        return self

    def spindle_multiplicity(self) -> Dict[int, int]:
        count: Dict[int, int] = defaultdict(int)
        for s in self.spindles:
            for v in s.vertices:
                count[v] += 1
        return dict(count)

    def spindles_of_vertex(self) -> Dict[int, List[int]]:
        """Spindle-vertex id -> ids of every spindle it belongs to."""
        out: Dict[int, List[int]] = defaultdict(list)
        for s in self.spindles:
            for v in s.vertices:
                out[v].append(s.id)
        return dict(out)

    def incident_spindles(self) -> Dict[int, List[int]]:
        """Core vertex id -> spindles having it as bottom or top."""
        out: Dict[int, List[int]] = defaultdict(list)
        for s in self.spindles:
            out[s.bottom].append(s.id)
            out[s.top].append(s.id)
        return dict(out)

    def bitmasks(self, subset: Optional[Sequence[int]] = None) -> Tuple[List[int], List[int]]:
        """Adjacency as int bitmasks over a local 0..k-1 relabelling of subset."""
        ids = list(range(self.n)) if subset is None else list(subset)
        local = {v: i for i, v in enumerate(ids)}
        masks = []
        for v in ids:
            m = 0
            for u in self.adj[v]:
                j = local.get(u)
                if j is not None:
                    m |= 1 << j
            masks.append(m)
        return ids, masks


class _Builder:
    """Accumulates vertices, merging coincident positions."""

    def __init__(self):
        self.vertices: List[Vertex] = []
        self.by_key: Dict[tuple, int] = {}
        self.merges = 0
        self.lattice_index: Dict[lat.Lat, int] = {}

    def add(self, p: Point, role: str, weight=1, lattice: Optional[lat.Lat] = None) -> int:
        key = p.key()
        vid = self.by_key.get(key)
        if vid is not None:
            v = self.vertices[vid]
            if v.role != role:
                raise ValueError(f"{role} vertex coincides with {v.role} vertex {vid}")
            if role == CORE:
                return vid
            v.weight += Fraction(weight)
            self.merges += 1
            return vid
        vid = len(self.vertices)
        self.vertices.append(Vertex(vid, p, role, Fraction(weight), lattice))
        self.by_key[key] = vid
        if lattice is not None:
            self.lattice_index[lattice] = vid
        return vid


def unit_pairs(points: Sequence[Point]) -> List[Tuple[int, int]]:
    """All index pairs at exact squared distance 1.

    A float grid with cell size 1 proposes candidates; each candidate is then
    decided exactly.  Coordinates here are small, so float error is far below
    the 1e-6 acceptance window.
    """
    approx = [p.approx() for p in points]
    grid: Dict[Tuple[int, int], List[int]] = defaultdict(list)
    for i, (x, y) in enumerate(approx):
        grid[(math.floor(x), math.floor(y))].append(i)
    pairs = []
    for i, (x, y) in enumerate(approx):
        cx, cy = math.floor(x), math.floor(y)
        for gx in (cx - 1, cx, cx + 1):
            for gy in (cy - 1, cy, cy + 1):
                for j in grid.get((gx, gy), ()):
                    if j <= i:
                        continue
                    dx = x - approx[j][0]
                    dy = y - approx[j][1]
                    if abs(dx * dx + dy * dy - 1.0) < 1e-6 and dist2(points[i], points[j]) == ONE:
                        pairs.append((i, j))
    return pairs


def _finish(name: str, b: _Builder, spindles=(), **meta) -> UDGraph:
    n = len(b.vertices)
    adj: List[set] = [set() for _ in range(n)]
    for i, j in unit_pairs([v.point for v in b.vertices]):
        adj[i].add(j)
        adj[j].add(i)
    return UDGraph(name, b.vertices, adj, list(spindles), merges=b.merges,
                   lattice_index=dict(b.lattice_index), **meta)


def build_core(d: int) -> UDGraph:
    """C_d: lattice points within distance d of the origin, with lattice edges."""
    if d < 0:
        raise ValueError("core radius must be nonnegative")
    b = _Builder()
    for p in lat.disk(d):
        b.add(lattice_point(*p), CORE, 1, lattice=p)
    return _finish(f"core:{d}", b, radius=d, center=point(0, 0))


def _core_from_points(name: str, pts: Iterable[lat.Lat], center: Point) -> UDGraph:
    b = _Builder()
    for p in pts:
        b.add(lattice_point(*p), CORE, 1, lattice=p)
    return _finish(name, b, center=center)


def spindle_orientation(direction: int) -> Orientation:
    return Orientation.CLOCKWISE if direction in lat.CW_DIRECTIONS else Orientation.COUNTERCLOCKWISE


def attach_spindles(core: UDGraph, mode: str = THREE_DIRECTIONS, spindle_weight=1,
                    directions: Optional[Sequence[int]] = None) -> UDGraph:
    """Hang a spindle on every diamond whose four vertices are all in the core.

    three_directions: bottom->top along 90, 210, 330 degrees, rotated
    clockwise about the bottom.  six_directions additionally uses the
    opposite directions rotated counterclockwise, so every diamond carries
    a mirror pair.  Coincident spindle vertices are merged and their weights
    summed.
    """
    if not core.lattice_index:
        raise ValueError("attach_spindles needs a lattice-built core")
    if directions is None:
        if mode == THREE_DIRECTIONS:
            directions = lat.CW_DIRECTIONS
        elif mode == SIX_DIRECTIONS:
            directions = tuple(range(6))
        else:
            raise ValueError(f"unknown spindle mode {mode!r}")
    b = _Builder()
    for v in core.vertices:
        b.add(v.point, v.role, v.weight, lattice=v.lattice)
    index = core.lattice_index
    spindles = []
    for v in core.vertices:
        p = v.lattice
        for k in directions:
            top = lat.add(p, lat.LONG[k])
            c1 = lat.add(p, lat.UNIT[k])
            c2 = lat.add(p, lat.UNIT[(k + 1) % 6])
            if top not in index or c1 not in index or c2 not in index:
                continue
            orient = spindle_orientation(k)
            spec = RotationSpec(v.point, orient)
            images = [rotate(lattice_point(*q), spec) for q in (c1, c2, top)]
            sv = tuple(b.add(q, SPINDLE, spindle_weight) for q in images)
            spindles.append(Spindle(len(spindles), v.id, index[top], (index[c1], index[c2]),
                                    sv, k, orient))
    prefix = "gd" if mode == THREE_DIRECTIONS else "gpd"
    name = f"{prefix}:{core.radius}" if core.radius is not None else f"{core.name}+spindles"
    return _finish(name, b, spindles, radius=core.radius, center=core.center, mode=mode)


def build_gd(d: int, core_weight=12, spindle_weight=1) -> UDGraph:
    g = attach_spindles(build_core(d), THREE_DIRECTIONS)
    return g.set_weights(core_weight, spindle_weight)


def build_gpd(d: int, core_weight=Fraction(31, 5), spindle_weight=Fraction(1, 2)) -> UDGraph:
    g = attach_spindles(build_core(d), SIX_DIRECTIONS)
    return g.set_weights(core_weight, spindle_weight)


def build_moser_spindle() -> UDGraph:
    """Two unit rhombi sharing the bottom vertex, far tips at distance 1."""
    b = _Builder()
    k = 1  # vertical diamond
    bottom = (0, 0)
    top = lat.LONG[k]
    c1, c2 = lat.UNIT[k], lat.UNIT[k + 1]
    ids = [b.add(lattice_point(*q), CORE, 1, lattice=q) for q in (bottom, top, c1, c2)]
    spec = RotationSpec(lattice_point(*bottom), Orientation.CLOCKWISE)
    sv = tuple(b.add(rotate(lattice_point(*q), spec), SPINDLE, 1) for q in (c1, c2, top))
    s = Spindle(0, ids[0], ids[1], (ids[2], ids[3]), sv, k, Orientation.CLOCKWISE)
    return _finish("moser", b, [s], center=lattice_point(*bottom))


def build_golomb() -> UDGraph:
    """Center, unit hexagon around it, and a unit triangle of circumradius 1/sqrt3.

    Triangle vertex i sits at angle phi + 120i where cos(phi) = sqrt3/6, which
    puts it at distance 1 from hexagon vertex 2i.
    """
    b = _Builder()
    b.add(point(0, 0), CORE, 1, lattice=(0, 0))
    for u in lat.UNIT:
        b.add(lattice_point(*u), CORE, 1, lattice=u)
    cos120 = QuadExt(Fraction(-1, 2))
    sin120 = QuadExt(0, Fraction(1, 2))
    tri = Point(QuadExt(Fraction(1, 6)), QuadExt(0, 0, Fraction(1, 6)))
    origin = point(0, 0)
    for _ in range(3):
        b.add(tri, SPINDLE, 1)
        tri = rotate_by(tri, origin, cos120, sin120)
    return _finish("golomb", b, center=origin)


# Twelve-vertex core: a side-4 triangle with its three corners cut off.
FISHER_ULLMAN_CORE: Tuple[lat.Lat, ...] = tuple(
    (i, j) for j in range(5) for i in range(5)
    if i + j <= 4 and (i, j) not in ((0, 0), (4, 0), (0, 4)))

# Core weights with every spindle vertex weighing 1: 7 on the inner
# triangle, 4 at side midpoints, 3 elsewhere.  They sum to 51, and the
# weight LP with one shared spindle weight reproduces them (see fraclp).
FISHER_ULLMAN_WEIGHTS: Dict[lat.Lat, int] = {
    (1, 1): 7, (2, 1): 7, (1, 2): 7,
    (2, 0): 4, (2, 2): 4, (0, 2): 4,
    (1, 0): 3, (3, 0): 3, (3, 1): 3, (1, 3): 3, (0, 3): 3, (0, 1): 3,
}


def fisher_ullman_center() -> Point:
    # centroid of the side-4 triangle (0,0), (4,0), (0,4): lattice (4/3, 4/3)
    return Point(QuadExt(2), QuadExt(0, Fraction(2, 3)))


def build_fisher_ullman(weights: Optional[Dict[lat.Lat, Fraction]] = None) -> UDGraph:
    core = _core_from_points("fisher-ullman-core", FISHER_ULLMAN_CORE, fisher_ullman_center())
    g = attach_spindles(core, THREE_DIRECTIONS)
    g.name = "fisher-ullman"
    w = FISHER_ULLMAN_WEIGHTS if weights is None else weights
    for v in g.vertices:
        if v.role == CORE and v.lattice in w:
            v.weight = Fraction(w[v.lattice])
    return g


def edge_census(g: UDGraph) -> Dict[str, int]:
    """Edges split into: among core vertices, inside one spindle (with its
    diamond), between spindle vertices of equally oriented spindles, and
    the rest (accidental unit distances)."""
    of = g.spindles_of_vertex()
    out = {"core": 0, "within_spindle": 0, "same_direction": 0, "other": 0}
    for u, v in g.edges():
        if g.vertices[u].role == CORE and g.vertices[v].role == CORE:
            out["core"] += 1
        elif any({u, v} <= set(s.vertices + s.diamond) for s in g.spindles):
            out["within_spindle"] += 1
        elif ({g.spindles[i].direction for i in of.get(u, ())}
              & {g.spindles[i].direction for i in of.get(v, ())}):
            out["same_direction"] += 1
        else:
            out["other"] += 1
    return out


@dataclass
class EmbeddingReport:
    ok: bool
    vertices: int
    edges: int
    violation: Optional[Tuple[int, int]] = None
    reason: str = ""

    def to_json(self) -> dict:
        return {"ok": self.ok, "vertices": self.vertices, "edges": self.edges,
                "violation": list(self.violation) if self.violation else None,
                "reason": self.reason}


def verify_embedding(g: UDGraph) -> EmbeddingReport:
    """Edges have length exactly 1, non-edges do not, positions are distinct."""
    seen: Dict[tuple, int] = {}
    for v in g.vertices:
        k = v.point.key()
        if k in seen:
            return EmbeddingReport(False, g.n, g.num_edges(), (seen[k], v.id), "coincident positions")
        seen[k] = v.id
    for u, v in g.edges():
        if dist2(g.vertices[u].point, g.vertices[v].point) != ONE:
            return EmbeddingReport(False, g.n, g.num_edges(), (u, v), "edge not of length 1")
    for u, v in unit_pairs([x.point for x in g.vertices]):
        if v not in g.adj[u]:
            return EmbeddingReport(False, g.n, g.num_edges(), (u, v), "unit pair missing as edge")
    return EmbeddingReport(True, g.n, g.num_edges())


def parse_selector(sel: str) -> UDGraph:
    """moser | golomb | fisher-ullman | core:d | gd:d | gpd:d"""
    if sel == "moser":
        return build_moser_spindle()
    if sel == "golomb":
        return build_golomb()
    if sel == "fisher-ullman":
        return build_fisher_ullman()
    kind, _, arg = sel.partition(":")
    if kind in ("core", "gd", "gpd") and arg.isdigit():
        d = int(arg)
        return {"core": build_core, "gd": build_gd, "gpd": build_gpd}[kind](d)
    raise ValueError(f"unknown graph selector {sel!r}")
