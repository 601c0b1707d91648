"""Independent sets: maximal-set enumeration, weighted maximum, core sampling.

All set algebra is done on Python ints used as bitsets over a local
0..n-1 labelling; public functions translate back to vertex ids.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .udgraph import CORE, UDGraph

WHOLE_GRAPH = "whole_graph"
CORE_ONLY = "core_only"


@dataclass(frozen=True)
class IndependentSet:
    vertices: FrozenSet[int]
    scope: str = WHOLE_GRAPH
    maximal: bool = False
    weight: Optional[Fraction] = None

    def __contains__(self, v) -> bool:
        return v in self.vertices

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(sorted(self.vertices))

    def to_json(self) -> dict:
        out = {"vertices": sorted(self.vertices), "scope": self.scope, "maximal": self.maximal}
        if self.weight is not None:
            out["weight"] = {"num": self.weight.numerator, "den": self.weight.denominator}
        return out


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def scope_ids(g: UDGraph, scope: str) -> List[int]:
    if scope == WHOLE_GRAPH:
        return list(range(g.n))
    if scope == CORE_ONLY:
        return g.core_ids()
    raise ValueError(f"unknown scope {scope!r}")


def maximal_independent_masks(adj: Sequence[int], part: Tuple[int, int] = (0, 1)) -> Iterator[int]:
    """Bron-Kerbosch with pivoting, run on the complement graph.

    adj[v] is the neighbour mask of v (no self loops).  Yields each maximal
    independent set once as a mask.  part=(k, m) keeps only the top-level
    branches whose index is k mod m, so m workers cover the tree exactly.
    """
    n = len(adj)
    closed = [adj[v] | (1 << v) for v in range(n)]

    def expand(r: int, p: int, x: int, top: bool) -> Iterator[int]:
        if not p:
            if not x:
                yield r
            return
        # pivot: the vertex of P|X whose closed neighbourhood covers the fewest of P
        best, pivot = None, -1
        for u in bits(p | x):
            c = (p & closed[u]).bit_count()
            if best is None or c < best:
                best, pivot = c, u
                if c <= 1:
                    break
        branch = 0
        for v in bits(p & closed[pivot]):
            if not top or branch % part[1] == part[0]:
                yield from expand(r | (1 << v), p & ~closed[v], x & ~closed[v], False)
            branch += 1
            p &= ~(1 << v)
            x |= 1 << v

    yield from expand(0, (1 << n) - 1, 0, True)


def enumerate_mis(g: UDGraph, scope: str = WHOLE_GRAPH,
                  part: Tuple[int, int] = (0, 1)) -> Iterator[IndependentSet]:
    """Stream the maximal independent sets of g (or of its core subgraph)."""
    ids, masks = g.bitmasks(scope_ids(g, scope))
    for m in maximal_independent_masks(masks, part):
        yield IndependentSet(frozenset(ids[i] for i in bits(m)), scope, True)


def is_independent(g: UDGraph, vs) -> bool:
    s = set(vs)
    return all(not (g.adj[v] & s) for v in s)


def is_maximal(g: UDGraph, vs, scope: str = WHOLE_GRAPH) -> bool:
    s = set(vs)
    for u in scope_ids(g, scope):
        if u not in s and not (g.adj[u] & s):
            return False
    return True


def check_set(g: UDGraph, ind: IndependentSet) -> None:
    """Independent re-check; raises AssertionError on a bad set."""
    allowed = set(scope_ids(g, ind.scope))
    if not ind.vertices <= allowed:
        raise AssertionError("set leaves its scope")
    if not is_independent(g, ind.vertices):
        raise AssertionError("set is not independent")
    if ind.maximal and not is_maximal(g, ind.vertices, ind.scope):
        raise AssertionError("set is not maximal")


def _integer_weights(weights: Sequence) -> Tuple[List[int], int]:
    fr = [Fraction(w) for w in weights]
    if any(w < 0 for w in fr):
        raise ValueError("weights must be nonnegative")
    scale = 1
    for w in fr:
        scale = lcm(scale, w.denominator)
    return [int(w * scale) for w in fr], scale


def _cover_bound(p: int, order: Sequence[int], adj: Sequence[int], w: Sequence[int]) -> int:
    """Greedy clique cover of the candidates p: sum of each clique's heaviest weight."""
    cliques: List[List[int]] = []  # [common-neighbour mask, max weight]
    total = 0
    for v in order:
        if not (p >> v) & 1:
            continue
        for c in cliques:
            if (c[0] >> v) & 1:
                c[0] &= adj[v]
                break
        else:
            cliques.append([adj[v] & p, w[v]])
            total += w[v]
    return total


def max_weight_masks(adj: Sequence[int], w: Sequence[int], lower: int = -1) -> Tuple[int, int]:
    """Exact maximum-weight independent set for integer weights.

    Branch and bound; the bound is a greedy clique cover of the candidates
    (sum over cliques of the heaviest member).  Returns (value, mask).  If
    lower is given, only sets strictly heavier than lower are searched for;
    (lower, 0) comes back when none exists.
    """
    n = len(adj)
    closed = [adj[v] | (1 << v) for v in range(n)]
    order = sorted(range(n), key=lambda v: (-w[v], v))
    best = [lower, 0]

    def search(p: int, cur: int, chosen: int) -> None:
        # take every candidate with no neighbour among the candidates
        while p:
            free = 0
            for v in bits(p):
                if not adj[v] & p:
                    free |= 1 << v
            if not free:
                break
            for v in bits(free):
                cur += w[v]
            chosen |= free
            p &= ~free
        if not p:
            if cur > best[0]:
                best[0], best[1] = cur, chosen
            return
        if cur + _cover_bound(p, order, adj, w) <= best[0]:
            return
        v = max(bits(p), key=lambda u: ((adj[u] & p).bit_count(), w[u]))
        search(p & ~closed[v], cur + w[v], chosen | (1 << v))
        search(p & ~(1 << v), cur, chosen)

    search((1 << n) - 1, 0, 0)
    return best[0], best[1]


def heavy_masks(adj: Sequence[int], w: Sequence[int], limit: int, k: int) -> List[Tuple[int, int]]:
    """Up to k independent sets of integer weight above limit, as (value, mask).

    Same search as max_weight_masks but the pruning threshold stays at
    limit, so it returns many violators at once; the heaviest set overall
    is not guaranteed to be among them unless fewer than k exist.
    """
    n = len(adj)
    closed = [adj[v] | (1 << v) for v in range(n)]
    order = sorted(range(n), key=lambda v: (-w[v], v))
    found: List[Tuple[int, int]] = []

    def search(p: int, cur: int, chosen: int) -> None:
        if len(found) >= k:
            return
        if not p:
            if cur > limit:
                found.append((cur, chosen))
            return
        if cur + _cover_bound(p, order, adj, w) <= limit:
            return
        v = max(bits(p), key=lambda u: (w[u], (adj[u] & p).bit_count()))
        search(p & ~closed[v], cur + w[v], chosen | (1 << v))
        search(p & ~(1 << v), cur, chosen)

    search((1 << n) - 1, 0, 0)
    return found


def max_weight_is(g: UDGraph, weights: Optional[Sequence] = None,
                  subset: Optional[Sequence[int]] = None) -> Tuple[IndependentSet, Fraction]:
    """Exact maximum-weight independent set with its certificate."""
    if weights is None:
        weights = g.weights()
    ids, masks = g.bitmasks(subset)
    iw, scale = _integer_weights([weights[v] for v in ids])
    value, mask = max_weight_masks(masks, iw)
    value = max(value, 0)
    chosen = frozenset(ids[i] for i in bits(mask))
    total = Fraction(value, scale)
    return IndependentSet(chosen, WHOLE_GRAPH, False, total), total


def independence_number(g: UDGraph) -> int:
    ind, _ = max_weight_is(g, [1] * g.n)
    return len(ind)


def random_maximal_core_set(core: UDGraph, rng: random.Random) -> IndependentSet:
    """Randomized greedy: scan core vertices in random order, keep what fits."""
    ids = core.core_ids()
    rng.shuffle(ids)
    chosen: set = set()
    for v in ids:
        if not core.adj[v] & chosen:
            chosen.add(v)
    return IndependentSet(frozenset(chosen), CORE_ONLY, True)


def maximal_core_sets(core: UDGraph, exhaustive: bool = True, samples: int = 0,
                      seed: int = 0) -> Iterator[IndependentSet]:
    """Maximal independent subsets of the core.

    Exhaustive enumeration, or `samples` seeded randomized-greedy draws.
    Samples are a coverage tool; no uniformity is claimed.
    """
    if exhaustive:
        yield from enumerate_mis(core, CORE_ONLY)
        return
    rng = random.Random(seed)
    for _ in range(samples):
        yield random_maximal_core_set(core, rng)


def core_completion(g: UDGraph, vs, weights: Optional[Sequence] = None) -> Tuple[frozenset, Fraction, Fraction]:
    """Make the core part of an independent set maximal without losing weight.

    Each core vertex v with no core neighbour in the set is added after
    dropping its spindle neighbours from the set.  Returns the new set with
    weights before and after; the caller asserts the second is at least the
    first, which holds whenever every core weight beats the heaviest
    independent set among that vertex's spindle neighbours.
    """
    if weights is None:
        weights = g.weights()
    s = set(vs)
    before = sum((Fraction(weights[v]) for v in s), Fraction(0))
    for v in g.core_ids():
        if v in s:
            continue
        nbrs = g.adj[v] & s
        if any(g.vertices[u].role == CORE for u in nbrs):
            continue
        s -= nbrs
        s.add(v)
    after = sum((Fraction(weights[v]) for v in s), Fraction(0))
    return frozenset(s), before, after


def spindle_neighbour_cap(g: UDGraph, v: int, weights: Optional[Sequence] = None) -> Fraction:
    """Heaviest independent set among the spindle neighbours of core vertex v."""
    if weights is None:
        weights = g.weights()
    nbrs = [u for u in sorted(g.adj[v]) if g.vertices[u].role != CORE]
    if not nbrs:
        return Fraction(0)
    _, val = max_weight_is(g, weights, nbrs)
    return val


def complete_with_spindles(g: UDGraph, vs, rng: Optional[random.Random] = None) -> frozenset:
    """Extend a core set by spindle vertices greedily (shuffled if rng given).

    The result is independent in g whenever vs is, and no further spindle
    vertex can be added.
    """
    s = set(vs)
    order = g.spindle_vertex_ids()
    if rng is not None:
        rng.shuffle(order)
    for v in order:
        if not g.adj[v] & s:
            s.add(v)
    return frozenset(s)
