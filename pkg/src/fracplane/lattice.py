"""Integer coordinates on the triangular lattice.

A lattice point (i, j) sits at i*(1, 0) + j*(1/2, sqrt3/2).  The map to the
plane is orientation-preserving and affine, so incidence, crossing and
cyclic-order questions can be answered with integer arithmetic directly on
(i, j); only lengths need the lattice norm i^2 + i*j + j^2.
"""

from __future__ import annotations

from typing import Iterable, Iterator, List, Tuple

Lat = Tuple[int, int]

# unit vectors in counterclockwise order, starting at angle 0
UNIT: Tuple[Lat, ...] = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))
# sqrt3 vectors: LONG[k] = UNIT[k] + UNIT[k+1], at angle 30 + 60k degrees
LONG: Tuple[Lat, ...] = tuple(
    (UNIT[k][0] + UNIT[(k + 1) % 6][0], UNIT[k][1] + UNIT[(k + 1) % 6][1]) for k in range(6))

# bottom->top directions used by the three-direction construction (90, 210,
# 330 degrees); spindles on these are rotated clockwise about the bottom.
CW_DIRECTIONS: Tuple[int, ...] = (1, 3, 5)
CCW_DIRECTIONS: Tuple[int, ...] = (0, 2, 4)


def norm(v: Lat) -> int:
    """Squared Euclidean length of a lattice vector."""
    i, j = v
    return i * i + i * j + j * j


def add(p: Lat, q: Lat) -> Lat:
    return (p[0] + q[0], p[1] + q[1])


def sub(p: Lat, q: Lat) -> Lat:
    return (p[0] - q[0], p[1] - q[1])


def neg(p: Lat) -> Lat:
    return (-p[0], -p[1])


def dist2(p: Lat, q: Lat) -> int:
    return norm(sub(p, q))


def cross(u: Lat, v: Lat) -> int:
    """Sign-faithful cross product (the true value is this times sqrt3/2)."""
    return u[0] * v[1] - u[1] * v[0]


def orient(p: Lat, q: Lat, r: Lat) -> int:
    c = cross(sub(q, p), sub(r, p))
    return (c > 0) - (c < 0)


def rot60(v: Lat) -> Lat:
    i, j = v
    return (-j, i + j)


def reflect(v: Lat) -> Lat:
    """Mirror across the horizontal axis."""
    i, j = v
    return (i + j, -j)


def isometries() -> List:
    """The 12 linear lattice isometries fixing the origin, as callables."""
    out = []
    for refl in (False, True):
        for r in range(6):
            def g(v, r=r, refl=refl):
                if refl:
                    v = reflect(v)
                for _ in range(r):
                    v = rot60(v)
                return v
            out.append(g)
    return out


ISOMETRIES = isometries()


def neighbors(p: Lat) -> Iterator[Lat]:
    for u in UNIT:
        yield add(p, u)


def disk(d: int) -> List[Lat]:
    """Lattice points within Euclidean distance d of the origin, scan order."""
    r2 = d * d
    pts = []
    for j in range(-2 * d - 1, 2 * d + 2):
        for i in range(-2 * d - 2, 2 * d + 3):
            if norm((i, j)) <= r2:
                pts.append((i, j))
    return pts


def direction_index(v: Lat) -> int:
    """Index k of a sqrt3 vector in LONG."""
    return LONG.index(v)


def angle_key(v: Lat):
    """0 for angles in [0, pi), 1 for [pi, 2pi)."""
    i, j = v
    # y has the sign of j; on j == 0, x has the sign of i
    upper = j > 0 or (j == 0 and i > 0)
    return 0 if upper else 1


def angle_cmp(u: Lat, v: Lat) -> int:
    hu, hv = angle_key(u), angle_key(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = cross(u, v)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


def segment_points(p: Lat, q: Lat) -> List[Lat]:
    """Lattice points strictly inside segment pq."""
    from math import gcd
    di, dj = q[0] - p[0], q[1] - p[1]
    g = gcd(abs(di), abs(dj))
    return [(p[0] + di * k // g, p[1] + dj * k // g) for k in range(1, g)]


def bbox(points: Iterable[Lat]):
    pts = list(points)
    return (min(p[0] for p in pts), min(p[1] for p in pts),
            max(p[0] for p in pts), max(p[1] for p in pts))
