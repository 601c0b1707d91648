"""Tilings of a lattice core by the faces of the short-segment plane graph.

Given a maximal independent set I of the core C_d, join every pair of
I-vertices at distance sqrt3, 2 or sqrt7 (the lattice distances below 3),
delete every segment that crosses another one, and take the bounded faces.
Each face near the core should be a copy of one of eight tile shapes.

All geometry here is integer arithmetic on lattice coordinates: the map
to the plane is affine and orientation-preserving, so crossings, cyclic
order and point location are unaffected.

Near the rim of C_d the faces depend on I-vertices outside the core.  I is
therefore first extended greedily (in a fixed scan order) to a maximal
independent set of C_{d+margin}; the added points are reported as phantoms.
Only faces meeting a unit triangle of C_d are kept.
"""

from __future__ import annotations

import functools
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from . import lattice as lat
from .indsets import bits, maximal_independent_masks, random_maximal_core_set
from .lattice import Lat

SEGMENT_NORMS = (3, 4, 7)
MARGIN = 5

# every lattice vector of norm 3, 4 or 7, in counterclockwise order from angle 0
OFFSETS: Tuple[Lat, ...] = tuple(sorted(
    ((i, j) for i in range(-3, 4) for j in range(-3, 4) if lat.norm((i, j)) in SEGMENT_NORMS),
    key=functools.cmp_to_key(lat.angle_cmp)))

TILE_NAMES = ("T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8")

Triangle = Tuple[int, int, int]  # (i, j, 0) up or (i, j, 1) down


class TilingError(Exception):
    pass


class UnclassifiableFace(TilingError):
    """A face of the plane graph near the core matched no tile."""

    def __init__(self, corners: Sequence[Lat], reason: str = "no matching tile"):
        super().__init__(f"{reason}: corners {list(corners)}")
        self.corners = tuple(corners)
        self.reason = reason


class TilingViolation(TilingError):
    pass


# -- integer polygon helpers ---------------------------------------------------


def area2(poly: Sequence[Lat]) -> int:
    """Twice the signed area in lattice units (positive for counterclockwise)."""
    s = 0
    k = len(poly)
    for a in range(k):
        (x1, y1), (x2, y2) = poly[a], poly[(a + 1) % k]
        s += x1 * y2 - x2 * y1
    return s


def _orient3(p, q, r) -> int:
    c = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (c > 0) - (c < 0)


def proper_cross(a: Lat, b: Lat, c: Lat, d: Lat, strict: bool = True) -> bool:
    """Open segments ab and cd meet in a single interior point.

    With strict set, collinear segments sharing more than a point raise.
    """
    o1, o2 = _orient3(a, b, c), _orient3(a, b, d)
    o3, o4 = _orient3(c, d, a), _orient3(c, d, b)
    if o1 == 0 and o2 == 0:
        # collinear: overlapping interiors would make crossing undefined
        lo1, hi1 = sorted((a, b))
        lo2, hi2 = sorted((c, d))
        if strict and max(lo1, lo2) < min(hi1, hi2):
            raise TilingError(f"collinear overlapping segments {a}-{b} and {c}-{d}")
        return False
    return o1 * o2 < 0 and o3 * o4 < 0


def locate(p, poly: Sequence) -> int:
    """1 if p is strictly inside the simple polygon, 0 on its boundary, -1 outside.

    Coordinates may be any exact numbers (ints for lattice points, scaled
    ints for triangle centroids).
    """
    inside = False
    k = len(poly)
    px, py = p
    for a in range(k):
        (x1, y1), (x2, y2) = poly[a], poly[(a + 1) % k]
        cr = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
        if cr == 0 and min(x1, x2) <= px <= max(x1, x2) and min(y1, y2) <= py <= max(y1, y2):
            return 0
        if (y1 > py) != (y2 > py):
            # x coordinate of the edge at height py, compared without division
            lhs = (px - x1) * (y2 - y1)
            rhs = (x2 - x1) * (py - y1)
            if (y2 - y1 > 0 and lhs < rhs) or (y2 - y1 < 0 and lhs > rhs):
                inside = not inside
    return 1 if inside else -1


def triangle_vertices(t: Triangle) -> Tuple[Lat, Lat, Lat]:
    i, j, down = t
    if down:
        return ((i + 1, j), (i + 1, j + 1), (i, j + 1))
    return ((i, j), (i + 1, j), (i, j + 1))


def triangle_key(pts: Iterable[Lat]) -> Triangle:
    s = set(pts)
    i0 = min(p[0] for p in s)
    j0 = min(p[1] for p in s)
    if s == {(i0, j0), (i0 + 1, j0), (i0, j0 + 1)}:
        return (i0, j0, 0)
    if s == {(i0 + 1, j0), (i0, j0 + 1), (i0 + 1, j0 + 1)}:
        return (i0, j0, 1)
    raise ValueError(f"not a unit triangle: {sorted(s)}")


def _centroid3(t: Triangle) -> Lat:
    """Three times the centroid, so it stays integral."""
    i, j, down = t
    return (3 * i + 2, 3 * j + 2) if down else (3 * i + 1, 3 * j + 1)


def covered_triangles(poly: Sequence[Lat]) -> List[Triangle]:
    """Unit triangles whose interior meets the interior of the polygon.

    A triangle qualifies iff its centroid is strictly inside, or one of the
    polygon's sides crosses one of its sides properly (a side through the
    interior of a unit triangle must cross one of its edges properly).
    """
    x0, y0, x1, y1 = lat.bbox(poly)
    scaled = [(3 * x, 3 * y) for x, y in poly]
    out = []
    for i in range(x0 - 1, x1 + 1):
        for j in range(y0 - 1, y1 + 1):
            for down in (0, 1):
                t = (i, j, down)
                if locate(_centroid3(t), scaled) == 1:
                    out.append(t)
                    continue
                tv = triangle_vertices(t)
                hit = False
                for a in range(len(poly)):
                    p, q = poly[a], poly[(a + 1) % len(poly)]
                    for e in range(3):
                        if proper_cross(p, q, tv[e], tv[(e + 1) % 3], strict=False):
                            hit = True
                            break
                    if hit:
                        break
                if hit:
                    out.append(t)
    return out


def lattice_points_of(poly: Sequence[Lat]) -> Tuple[List[Lat], List[Lat]]:
    """(boundary non-corner points, strictly interior points)."""
    x0, y0, x1, y1 = lat.bbox(poly)
    corners = set(poly)
    boundary, interior = [], []
    for i in range(x0, x1 + 1):
        for j in range(y0, y1 + 1):
            p = (i, j)
            if p in corners:
                continue
            where = locate(p, poly)
            if where == 0:
                boundary.append(p)
            elif where == 1:
                interior.append(p)
    return boundary, interior


def _strip_collinear(poly: List[Lat]) -> List[Lat]:
    out = list(poly)
    changed = True
    while changed and len(out) > 3:
        changed = False
        for a in range(len(out)):
            p, q, r = out[a - 1], out[a], out[(a + 1) % len(out)]
            if _orient3(p, q, r) == 0:
                del out[a]
                changed = True
                break
    return out


# -- tile shapes ------------------------------------------------------------------


@dataclass(frozen=True)
class TileTemplate:
    name: str
    corners: Tuple[Lat, ...]  # counterclockwise

    @functools.cached_property
    def points(self) -> Tuple[Tuple[Lat, ...], Tuple[Lat, ...]]:
        b, i = lattice_points_of(self.corners)
        return tuple(b), tuple(i)

    @property
    def boundary(self) -> Tuple[Lat, ...]:
        return self.points[0]

    @property
    def interior(self) -> Tuple[Lat, ...]:
        return self.points[1]

    @property
    def side_norms(self) -> Tuple[int, ...]:
        k = len(self.corners)
        return tuple(lat.dist2(self.corners[a], self.corners[(a + 1) % k]) for a in range(k))

    @functools.cached_property
    def triangles(self) -> Tuple[Triangle, ...]:
        return tuple(covered_triangles(self.corners))


def _ccw(pts: Sequence[Lat]) -> Tuple[Lat, ...]:
    pts = tuple(pts)
    return pts if area2(pts) > 0 else tuple(reversed(pts))


# Corner coordinates read off the tile drawings; one representative each.
TEMPLATES: Dict[str, TileTemplate] = {name: TileTemplate(name, _ccw(c)) for name, c in (
    ("T1", [(1, -1), (3, -2), (2, -3)]),            # equilateral, side sqrt3
    ("T2", [(1, 0), (1, -2), (3, -2)]),             # equilateral, side 2
    ("T3", [(0, -1), (2, -3), (3, -2)]),            # sides 2, sqrt3, sqrt7
    ("T4", [(1, -1), (4, -2), (2, -3)]),            # sides sqrt7, sqrt7, sqrt3
    ("T5", [(1, 0), (0, -2), (3, -3)]),             # equilateral, side sqrt7
    ("T6", [(1, -1), (3, -1), (4, -3), (2, -3)]),   # parallelogram, sides 2 and sqrt3
    ("T7", [(0, -1), (2, -1), (4, -4), (2, -4)]),   # parallelogram, sides 2 and sqrt7
    ("T8", [(1, -1), (3, -1), (4, -4), (1, -3)]),   # sides 2, sqrt7, sqrt7, 2
)}


def _apply(iso: int, p: Lat, shift: Lat = (0, 0)) -> Lat:
    q = lat.ISOMETRIES[iso](p)
    return (q[0] + shift[0], q[1] + shift[1])


def _edge_vectors(poly: Sequence[Lat]) -> Tuple[Lat, ...]:
    k = len(poly)
    return tuple(lat.sub(poly[(a + 1) % k], poly[a]) for a in range(k))


def canonical_form(corners: Sequence[Lat]) -> Tuple[Lat, ...]:
    """Least edge-vector sequence over the 12 isometries and all starting corners."""
    best = None
    for iso in range(12):
        img = _ccw([_apply(iso, p) for p in corners])
        ev = _edge_vectors(img)
        for s in range(len(ev)):
            cand = ev[s:] + ev[:s]
            if best is None or cand < best:
                best = cand
    return best


def _shape_table() -> Dict[Tuple[Lat, ...], Tuple[str, int, int]]:
    """edge-vector sequence -> (tile, isometry, index of the template corner
    that the sequence starts from)."""
    table: Dict[Tuple[Lat, ...], Tuple[str, int, int]] = {}
    for name, tpl in TEMPLATES.items():
        k = len(tpl.corners)
        for iso in range(12):
            img = [_apply(iso, p) for p in tpl.corners]
            order = list(range(k))
            if area2(img) < 0:
                order.reverse()
            img = [img[a] for a in order]
            ev = _edge_vectors(img)
            for s in range(k):
                key = ev[s:] + ev[:s]
                table.setdefault(key, (name, iso, order[s]))
    return table


SHAPES = _shape_table()


@dataclass(frozen=True)
class Placement:
    """p_actual = isometry(p_template) + shift."""

    iso: int
    shift: Lat

    def __call__(self, p: Lat) -> Lat:
        return _apply(self.iso, p, self.shift)

    def to_json(self) -> dict:
        reflect = self.iso >= 6
        return {"rotation_deg": 60 * (self.iso % 6), "reflect": reflect, "shift": list(self.shift)}


def classify_tile(corners: Sequence[Lat]) -> Tuple[str, Placement]:
    """Match a corner polygon against the templates up to lattice isometry."""
    poly = _strip_collinear(list(_ccw(corners)))
    hit = SHAPES.get(_edge_vectors(poly))
    if hit is None:
        raise UnclassifiableFace(poly)
    name, iso, start = hit
    q = _apply(iso, TEMPLATES[name].corners[start])
    shift = lat.sub(poly[0], q)
    placement = Placement(iso, shift)
    if {placement(c) for c in TEMPLATES[name].corners} != set(poly):
        raise UnclassifiableFace(poly, "placement mismatch")
    return name, placement


# -- the tiling ---------------------------------------------------------------------


@dataclass
class Tile:
    type: str
    placement: Placement
    corners: Tuple[Lat, ...]
    corner_ids: Tuple[Optional[int], ...]  # core vertex id, None for a phantom
    boundary: Tuple[Lat, ...]
    interior: Tuple[Lat, ...]
    triangles: Tuple[Triangle, ...]

    @property
    def b(self) -> int:
        return len(self.boundary)

    @property
    def i(self) -> int:
        return len(self.interior)

    def sides(self) -> List[Tuple[Lat, Lat]]:
        k = len(self.corners)
        return [(self.corners[a], self.corners[(a + 1) % k]) for a in range(k)]

    def to_json(self) -> dict:
        return {"type": self.type, "placement": self.placement.to_json(),
                "corners": [list(c) for c in self.corners],
                "corner_ids": list(self.corner_ids)}


@dataclass
class Tiling:
    d: int
    independent: FrozenSet[int]
    phantoms: Tuple[Lat, ...]
    tiles: List[Tile]
    multiplicity: Dict[Triangle, int]
    deleted: List[Tuple[Lat, Lat]] = field(default_factory=list)
    core_index: Dict[Lat, int] = field(default_factory=dict)

    def counts(self) -> Dict[str, int]:
        c = Counter(t.type for t in self.tiles)
        return {name: c.get(name, 0) for name in TILE_NAMES}

    def to_json(self) -> dict:
        return {"d": self.d, "independent": sorted(self.independent),
                "phantoms": [list(p) for p in self.phantoms],
                "tiles": [t.to_json() for t in self.tiles],
                "deleted_pairs": len(self.deleted) // 2,
                "counts": self.counts()}


class TilingContext:
    """Geometry shared by every tiling of one core radius."""

    def __init__(self, d: int, margin: int = MARGIN):
        self.d = d
        self.margin = margin
        self.points: List[Lat] = lat.disk(d + margin)
        self.index: Dict[Lat, int] = {p: k for k, p in enumerate(self.points)}
        n = len(self.points)
        r2 = d * d
        self.in_core = [lat.norm(p) <= r2 for p in self.points]
        self.extra = [k for k in range(n) if not self.in_core[k]]
        self.nbrs: List[List[int]] = [
            [self.index[q] for q in lat.neighbors(p) if q in self.index] for p in self.points]
        # counterclockwise partner lists, and the later-indexed half of each
        self.ring: List[List[int]] = []
        for p in self.points:
            row = []
            for off in OFFSETS:
                k = self.index.get(lat.add(p, off))
                if k is not None:
                    row.append(k)
            self.ring.append(row)
        self.forward = [[b for b in row if b > a] for a, row in enumerate(self.ring)]
        self.core_triangles: Set[Triangle] = set()
        core_pts = {p for k, p in enumerate(self.points) if self.in_core[k]}
        self.core_points = core_pts
        for (i, j) in core_pts:
            for down in (0, 1):
                t = (i, j, down)
                if all(v in core_pts for v in triangle_vertices(t)):
                    self.core_triangles.add(t)
        # a tile meeting the core has all corners within sqrt7 of it
        reach = (d + 3) ** 2
        self.near = [lat.norm(p) <= reach for p in self.points]
        self._cross: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
        self._tpl_cache: Dict[Tuple[str, int], Tuple] = {}
        self.faces: Dict[Tuple[int, ...], object] = {}

    def crossing(self, a: int, b: int) -> List[Tuple[int, int]]:
        """Potential segments (pairs of context points) crossing segment ab."""
        key = (a, b) if a < b else (b, a)
        hit = self._cross.get(key)
        if hit is not None:
            return hit
        pa, pb = self.points[key[0]], self.points[key[1]]
        out = []
        cx = (pa[0] + pb[0]) // 2
        cy = (pa[1] + pb[1]) // 2
        for i in range(cx - 4, cx + 5):
            for j in range(cy - 4, cy + 5):
                c = self.index.get((i, j))
                if c is None:
                    continue
                for e in self.forward[c]:
                    if c in key or e in key:
                        continue
                    # collinear overlaps need adjacent members, so never both present
                    if proper_cross(pa, pb, self.points[c], self.points[e], strict=False):
                        out.append((c, e))
        self._cross[key] = out
        return out

    def template_data(self, name: str, iso: int):
        """Boundary, interior and triangles of a template under an isometry
        (before the shift)."""
        key = (name, iso)
        hit = self._tpl_cache.get(key)
        if hit is None:
            tpl = TEMPLATES[name]
            bnd = tuple(_apply(iso, p) for p in tpl.boundary)
            inn = tuple(_apply(iso, p) for p in tpl.interior)
            tris = tuple(triangle_key(_apply(iso, v) for v in triangle_vertices(t))
                         for t in tpl.triangles)
            corners = tuple(_apply(iso, p) for p in tpl.corners)
            hit = (bnd, inn, tris, corners)
            self._tpl_cache[key] = hit
        return hit


@functools.lru_cache(maxsize=16)
def context(d: int, margin: int = MARGIN) -> TilingContext:
    return TilingContext(d, margin)


def extend_to_maximal(ctx: TilingContext, flags: bytearray) -> List[int]:
    """Greedily add context points outside the core, in scan order."""
    added = []
    nbrs = ctx.nbrs
    for k in ctx.extra:
        if flags[k]:
            continue
        for n in nbrs[k]:
            if flags[n]:
                break
        else:
            flags[k] = 1
            added.append(k)
    return added


def plane_segments(ctx: TilingContext, flags: bytearray) -> Tuple[Dict[int, List[int]], List[Tuple[int, int]]]:
    """Short segments between members, minus every segment that crosses another.

    Returns the surviving counterclockwise adjacency lists and the deleted
    segments.  Deletion is one simultaneous pass: all crossing segments are
    marked first, then removed together.
    """
    members = [k for k in range(len(flags)) if flags[k]]
    marked = set()
    for a in members:
        for b in ctx.forward[a]:
            if flags[b]:
                for c, e in ctx.crossing(a, b):
                    if flags[c] and flags[e]:
                        marked.add((a, b))
                        break
    adj: Dict[int, List[int]] = {}
    for a in members:
        row = []
        for b in ctx.ring[a]:
            if flags[b] and ((a, b) if a < b else (b, a)) not in marked:
                row.append(b)
        adj[a] = row
    return adj, sorted(marked)


def walk_face(adj: Dict[int, List[int]], u: int, v: int, limit: int = 64) -> List[int]:
    """Vertices of the face to the left of half-edge u->v, in order."""
    start = (u, v)
    cycle = [u]
    steps = 0
    while True:
        row = adj[v]
        w = row[row.index(u) - 1]
        u, v = v, w
        if (u, v) == start:
            return cycle
        cycle.append(u)
        steps += 1
        if steps > limit:
            raise TilingError("face walk did not close")


def _relevant(ctx: TilingContext, tris, bnd, inner) -> bool:
    core_tris = ctx.core_triangles
    if any(t in core_tris for t in tris):
        return True
    core_pts = ctx.core_points
    return any(p in core_pts for p in bnd) or any(p in core_pts for p in inner)


def _face_record(ctx: TilingContext, cyc: Sequence[int]):
    """Classify one face; None when it is the outer face or misses the core.

    The result depends only on the face, so contexts cache it across sets.
    """
    pts = ctx.points
    poly = [pts[s] for s in cyc]
    if area2(poly) <= 0:
        return None  # outer face, far from the core
    core_tris = ctx.core_triangles
    simple = len(set(cyc)) == len(cyc)
    hit = SHAPES.get(_edge_vectors(poly)) if simple else None
    if hit is None:
        if not simple:
            if any(t in core_tris for t in covered_triangles(poly)):
                return UnclassifiableFace(poly, "face boundary is not a simple polygon")
            return None
        try:
            name, placement = classify_tile(poly)
        except UnclassifiableFace as exc:
            if any(t in core_tris for t in covered_triangles(poly)):
                return exc
            return None
        corners = tuple(_strip_collinear(poly))
    else:
        name, iso, start = hit
        q = _apply(iso, TEMPLATES[name].corners[start])
        placement = Placement(iso, (poly[0][0] - q[0], poly[0][1] - q[1]))
        corners = tuple(poly)
    bnd, inn, tris, _ = ctx.template_data(name, placement.iso)
    sx, sy = placement.shift
    tris = tuple((t[0] + sx, t[1] + sy, t[2]) for t in tris)
    bnd = tuple((p[0] + sx, p[1] + sy) for p in bnd)
    inner = tuple((p[0] + sx, p[1] + sy) for p in inn)
    if not _relevant(ctx, tris, bnd, inner):
        return None
    inner_idx = tuple(ctx.index[p] for p in inner if p in ctx.index)
    hits = tuple(t for t in tris if t in core_tris)
    return (name, placement, corners, bnd, inner, tris, inner_idx, hits)


def build_tiling(core, independent: Iterable[int], margin: int = MARGIN,
                 ctx: Optional[TilingContext] = None) -> Tiling:
    """Tile the core from a maximal independent set of its vertices.

    A tile is kept when it meets a unit triangle of the core or has a core
    vertex on its boundary or inside it.  Raises UnclassifiableFace when
    such a face is not one of the eight tiles; that would contradict the
    tiling statement at this I.
    """
    d = core.radius
    if d is None or not core.lattice_index:
        raise ValueError("build_tiling needs a lattice core")
    ctx = ctx or context(d, margin)
    ids = frozenset(independent)
    flags = bytearray(len(ctx.points))
    for v in ids:
        flags[ctx.index[core.vertices[v].lattice]] = 1
    core_index = core.lattice_index
    phantoms = extend_to_maximal(ctx, flags)
    adj, deleted = plane_segments(ctx, flags)

    pts = ctx.points
    cache = ctx.faces
    seen: Set[Tuple[int, int]] = set()
    tiles: List[Tile] = []
    mult: Counter = Counter()
    near = ctx.near
    for a, row in adj.items():
        if not near[a]:
            continue
        if not row:
            raise UnclassifiableFace([pts[a]], "isolated independent vertex")
        for b in row:
            if (a, b) in seen:
                continue
            cyc = walk_face(adj, a, b)
            k = len(cyc)
            for s in range(k):
                seen.add((cyc[s], cyc[(s + 1) % k]))
            m = cyc.index(min(cyc))
            key = tuple(cyc[m:] + cyc[:m])
            if key in cache:
                rec = cache[key]
            else:
                rec = cache[key] = _face_record(ctx, key)
            if rec is None:
                continue
            if isinstance(rec, UnclassifiableFace):
                raise rec
            name, placement, corners, bnd, inner, tris, inner_idx, hits = rec
            for s in inner_idx:
                if flags[s]:
                    raise TilingViolation(f"independent vertex {pts[s]} inside a {name} tile")
            tiles.append(Tile(name, placement, corners,
                              tuple(core_index.get(c) for c in corners), bnd, inner, tris))
            mult.update(hits)
    multiplicity = {t: mult.get(t, 0) for t in ctx.core_triangles}
    return Tiling(d, ids, tuple(pts[k] for k in phantoms), tiles, multiplicity,
                  [(pts[a], pts[b]) for a, b in deleted], dict(core_index))


def verify_tiling(tiling: Tiling) -> None:
    """Corners in I (or phantoms), multiplicities 1 or 2, no I-vertex inside."""
    phantoms = set(tiling.phantoms)
    for t in tiling.tiles:
        for c, vid in zip(t.corners, t.corner_ids):
            if vid is None:
                if c not in phantoms:
                    raise TilingViolation(f"corner {c} is neither in I nor a phantom")
            elif vid not in tiling.independent:
                raise TilingViolation(f"corner {c} is not in I")
        for p in t.interior:
            vid = tiling.core_index.get(p)
            if (vid is not None and vid in tiling.independent) or p in phantoms:
                raise TilingViolation(f"independent vertex {p} inside a {t.type} tile")
    for tri, m in tiling.multiplicity.items():
        if m not in (1, 2):
            raise TilingViolation(f"face {tri} covered {m} times")


# -- local case analysis --------------------------------------------------------------

# The labelled neighbourhood of an I-vertex w at the origin: w0 is the
# neighbour whose edge lies inside the tile, w5 the far end of that axis.
# Points w11m, w12m mirror w11, w12 across the w-w5 axis.
NAMED: Dict[str, Lat] = {
    "w0": (1, 0), "w1": (2, -2), "w2": (3, -2), "w3": (2, -1), "w4": (3, -1),
    "w5": (2, 0), "w6": (2, 1), "w7": (1, 1), "w8": (1, 2), "w9": (0, 2),
    "w10": (3, 0), "w11": (3, 1), "w12": (2, 2), "w11m": (4, -1), "w12m": (4, -2),
}
_FREE = ("w1", "w2", "w3", "w4", "w6", "w7", "w8", "w9", "w10", "w11", "w12", "w11m", "w12m")


@dataclass
class LocalCase:
    members: Tuple[str, ...]
    tile: str
    corners: Tuple[Lat, ...]


@dataclass
class LocalCaseReport:
    cases: List[LocalCase]
    no_interior_edge: Tuple[str, ...]

    @property
    def types(self) -> Set[str]:
        return {c.tile for c in self.cases} | set(self.no_interior_edge)


def _face_toward(points: Sequence[Lat], w: Lat, direction: Lat) -> List[Lat]:
    """Corners of the face of the plane graph on `points` that contains the
    ray from w along `direction` near w."""
    ctx_pts = list(points)
    idx = {p: k for k, p in enumerate(ctx_pts)}
    segs = []
    for a, p in enumerate(ctx_pts):
        for b in range(a + 1, len(ctx_pts)):
            if lat.dist2(p, ctx_pts[b]) in SEGMENT_NORMS:
                segs.append((a, b))
    marked = set()
    for s in segs:
        for t in segs:
            if s != t and proper_cross(ctx_pts[s[0]], ctx_pts[s[1]], ctx_pts[t[0]], ctx_pts[t[1]]):
                marked.add(s)
    adj: Dict[int, List[int]] = {k: [] for k in range(len(ctx_pts))}
    for a, b in segs:
        if (a, b) not in marked:
            adj[a].append(b)
            adj[b].append(a)
    key = functools.cmp_to_key(lat.angle_cmp)
    for a in adj:
        adj[a].sort(key=lambda b: key(lat.sub(ctx_pts[b], ctx_pts[a])))
    a = idx[w]
    row = adj[a]
    if not row:
        raise UnclassifiableFace([w], "isolated vertex")
    # last neighbour strictly before the direction, counterclockwise
    before = [b for b in row if lat.angle_cmp(lat.sub(ctx_pts[b], w), direction) < 0]
    b = before[-1] if before else row[-1]
    cyc = walk_face(adj, a, b)
    return [ctx_pts[k] for k in cyc]


def _interior_corner_edge(corners: Sequence[Lat]) -> bool:
    """Does some lattice edge at a corner run into the polygon's interior?"""
    scaled = [(2 * x, 2 * y) for x, y in corners]
    for c in corners:
        for u in lat.UNIT:
            mid = (2 * c[0] + u[0], 2 * c[1] + u[1])
            if locate(mid, scaled) == 1:
                return True
    return False


def enumerate_local_cases() -> LocalCaseReport:
    """Re-derive the eight tiles from the labelled neighbourhood of a corner.

    w is in I, so its neighbours are not; w5 is not in I (the edge w-w0 is
    inside the tile).  Every other labelled point is free, subject to
    independence and to domination of w3, w4, w5, w6, w7 (each of these,
    if outside I, needs a neighbour in I; their neighbourhoods are all
    labelled or adjacent to w).  For each assignment, the face of the plane
    graph on the chosen points that contains w-w0 is classified.  Tiles with
    no interior lattice edge at a corner are collected separately from the
    templates.
    """
    w = (0, 0)
    forbidden = set(lat.neighbors(w)) | {NAMED["w5"]}
    must_dominate = ("w3", "w4", "w5", "w6", "w7")
    cases = []
    for mask in range(1 << len(_FREE)):
        chosen = [n for k, n in enumerate(_FREE) if mask >> k & 1]
        pts = [NAMED[n] for n in chosen]
        sel = set(pts) | {w}
        if any(p in forbidden for p in pts):
            continue
        if any(lat.dist2(p, q) == 1 for p in sel for q in sel if p < q):
            continue
        ok = True
        for n in must_dominate:
            p = NAMED[n]
            if p in sel:
                continue
            if not any(q in sel for q in lat.neighbors(p)):
                ok = False
                break
        if not ok:
            continue
        corners = _face_toward([w] + pts, w, lat.UNIT[0])
        if area2(corners) <= 0:
            raise UnclassifiableFace(corners, "unbounded face")
        name, _ = classify_tile(corners)
        cases.append(LocalCase(tuple(chosen), name, tuple(corners)))
    edgeless = tuple(name for name, tpl in TEMPLATES.items()
                     if not _interior_corner_edge(tpl.corners))
    return LocalCaseReport(cases, edgeless)


# -- 7-colouring and density -------------------------------------------------------------


def lattice_color(p: Lat) -> int:
    """Colour classes are translates of the sublattice spanned by (1, 2) and (3, -1)."""
    return (p[0] + 3 * p[1]) % 7


@dataclass
class SevenColoring:
    colors: Dict[int, int]  # vertex id -> colour
    classes: List[List[int]]
    largest: int  # colour index of the largest class

    @property
    def A(self) -> List[int]:
        return self.classes[self.largest]


def seven_coloring(core) -> SevenColoring:
    colors = {vid: lattice_color(p) for p, vid in core.lattice_index.items()}
    classes = [[] for _ in range(7)]
    for vid in sorted(colors):
        classes[colors[vid]].append(vid)
    largest = max(range(7), key=lambda c: (len(classes[c]), -c))
    return SevenColoring(colors, classes, largest)


def density_requirement(core, coloring: Optional[SevenColoring] = None) -> int:
    """Members of the largest colour class whose closed neighbourhood lies in
    the core; a maximal independent set meets each of these disjoint
    neighbourhoods, so it has at least this many vertices."""
    coloring = coloring or seven_coloring(core)
    count = 0
    for vid in coloring.A:
        p = core.vertices[vid].lattice
        if all(q in core.lattice_index for q in lat.neighbors(p)):
            count += 1
    return count


# -- populations -----------------------------------------------------------------------------


def core_symmetry_tables(core) -> Tuple[List[int], List[List[List[int]]]]:
    """Byte lookup tables for the 12 lattice isometries acting on core masks.

    Returns (ids, tables) where bit i of a mask stands for ids[i] and
    tables[g][c][b] is the image under isometry g of byte value b in
    chunk c.  The identity is isometry 0.
    """
    ids, _ = core.bitmasks(core.core_ids())
    local = {core.vertices[v].lattice: i for i, v in enumerate(ids)}
    chunks = (len(ids) + 7) // 8
    tables = []
    for g in range(12):
        perm = [local[lat.ISOMETRIES[g](core.vertices[v].lattice)] for v in ids]
        tab = []
        for c in range(chunks):
            row = [0] * 256
            for b in range(1, 256):
                low = b & -b
                i = 8 * c + low.bit_length() - 1
                row[b] = row[b ^ low] | (1 << perm[i] if i < len(ids) else 0)
            tab.append(row)
        tables.append(tab)
    return ids, tables


def is_orbit_representative(mask: int, tables) -> bool:
    """True when no isometry maps mask to a smaller mask."""
    chunks = len(tables[0])
    parts = [(mask >> (8 * c)) & 255 for c in range(chunks)]
    for tab in tables[1:]:
        img = 0
        for c in range(chunks):
            img |= tab[c][parts[c]]
        if img < mask:
            return False
    return True


@dataclass
class TilingSurvey:
    d: int
    sets: int
    checked: int
    tile_counts: Counter
    multiplicities: Counter
    failures: List[str]
    symmetric: bool

    @property
    def ok(self) -> bool:
        return not self.failures and self.checked > 0

    def to_json(self) -> dict:
        return {"d": self.d, "sets": self.sets, "tilings_built": self.checked,
                "symmetry_reduced": self.symmetric, "ok": self.ok,
                "tile_counts": {n: self.tile_counts.get(n, 0) for n in TILE_NAMES},
                "multiplicities": {str(k): v for k, v in sorted(self.multiplicities.items())},
                "failures": self.failures[:10]}


def _survey_one(core, ctx, ids_set, counts, mult, failures) -> None:
    try:
        t = build_tiling(core, ids_set, ctx=ctx)
        verify_tiling(t)
    except TilingError as exc:
        failures.append(f"{sorted(core.vertices[v].lattice for v in ids_set)}: {exc}")
        return
    counts.update(x.type for x in t.tiles)
    mult.update(t.multiplicity.values())


def survey_exhaustive(core, symmetric: bool = True, limit: Optional[int] = None) -> TilingSurvey:
    """Tile every maximal independent set of the core.

    With symmetric=True only one set per orbit of the 12 isometries is
    tiled.  That suffices: the images of I, its phantom extension and its
    tiling under an isometry are a maximal set, an extension and a valid
    tiling, so the tiling statement holds at I iff it holds at any image.
    """
    ids, tables = core_symmetry_tables(core)
    _, masks = core.bitmasks(ids)
    ctx = context(core.radius)
    counts: Counter = Counter()
    mult: Counter = Counter()
    failures: List[str] = []
    sets = checked = 0
    for m in maximal_independent_masks(masks):
        sets += 1
        if limit is not None and sets > limit:
            sets -= 1
            break
        if symmetric and not is_orbit_representative(m, tables):
            continue
        checked += 1
        _survey_one(core, ctx, frozenset(ids[i] for i in bits(m)), counts, mult, failures)
    return TilingSurvey(core.radius, sets, checked, counts, mult, failures, symmetric)


def survey_samples(core, samples: int, seed: int = 0) -> TilingSurvey:
    """Tile `samples` seeded randomized-greedy maximal sets of the core."""
    rng = random.Random(seed)
    ctx = context(core.radius)
    counts: Counter = Counter()
    mult: Counter = Counter()
    failures: List[str] = []
    for _ in range(samples):
        _survey_one(core, ctx, random_maximal_core_set(core, rng).vertices, counts, mult, failures)
    return TilingSurvey(core.radius, samples, samples, counts, mult, failures, False)
