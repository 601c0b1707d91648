"""Exact rational linear programming and the independent-set weight LPs.

The engine is a dictionary-form simplex (one row per basic variable) over
Fractions with Bland's rule in both the primal and the dual method.  The
weight LPs are solved by row generation: start from a covering family of
maximal independent sets, then repeatedly add the heaviest independent set
under the current weights until none weighs more than the right-hand side.
That last separation step is exact, so the final value is the optimum of
the full LP over every maximal independent set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

from .exactnum import Point, QuadExt, rotate_by
from .indsets import (
    WHOLE_GRAPH, _integer_weights, bits, enumerate_mis, heavy_masks, max_weight_masks,
)
from .udgraph import UDGraph

LE, GE, EQ = "<=", ">=", "=="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LPError(ArithmeticError):
    pass


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


class RowCapExceeded(LPError):
    pass


@dataclass
class RationalLP:
    """max c.x subject to rows, lower <= x <= upper (lower None = free)."""

    names: List[str] = field(default_factory=list)
    objective: List[Fraction] = field(default_factory=list)
    lower: List[Optional[Fraction]] = field(default_factory=list)
    upper: List[Optional[Fraction]] = field(default_factory=list)
    rows: List[Tuple[Dict[int, Fraction], str, Fraction]] = field(default_factory=list)

    def add_var(self, name: str, obj=0, lower=0, upper=None) -> int:
        self.names.append(name)
        self.objective.append(Fraction(obj))
        self.lower.append(None if lower is None else Fraction(lower))
        self.upper.append(None if upper is None else Fraction(upper))
        return len(self.names) - 1

    def add_row(self, coeffs: Dict[int, object], sense: str, rhs) -> int:
        if sense not in (LE, GE, EQ):
            raise ValueError(f"bad sense {sense!r}")
        row = {}
        for j, a in coeffs.items():
            if not 0 <= j < len(self.names):
                raise ValueError(f"row references unknown variable {j}")
            a = Fraction(a)
            if a:
                row[j] = a
        self.rows.append((row, sense, Fraction(rhs)))
        return len(self.rows) - 1

    def to_lp_text(self) -> str:
        """CPLEX-style LP text; coefficients printed as exact fractions."""
        def term(a: Fraction, name: str, first: bool) -> str:
            sign = "-" if a < 0 else ("" if first else "+")
            mag = abs(a)
            coef = "" if mag == 1 else f"{mag} "
            return f"{sign} {coef}{name}".strip() if first else f" {sign} {coef}{name}"

        def expr(coeffs) -> str:
            items = [(j, a) for j, a in sorted(coeffs.items()) if a]
            if not items:
                return "0"
            return "".join(term(a, self.names[j], k == 0) for k, (j, a) in enumerate(items))

        lines = ["Maximize", " obj: " + expr(dict(enumerate(self.objective))), "Subject To"]
        for i, (row, sense, rhs) in enumerate(self.rows):
            lines.append(f" c{i}: {expr(row)} {sense} {rhs}")
        lines.append("Bounds")
        for j, name in enumerate(self.names):
            lo, hi = self.lower[j], self.upper[j]
            if lo is None and hi is None:
                lines.append(f" {name} free")
            elif hi is None:
                lines.append(f" {name} >= {lo}")
            else:
                lines.append(f" {'-inf' if lo is None else lo} <= {name} <= {hi}")
        lines.append("End")
        return "\n".join(lines) + "\n"


class Dictionary:
    """max z, with x_B[i] = rhs[i] - sum_j T[i][j] x_N[j], z = z0 + sum_j c[j] x_N[j].

    All variables are nonnegative.  Variables 0..n-1 are structural, the
    rest are slacks of the rows in the order they were added.
    """

    def __init__(self, c: Sequence[Fraction]):
        self.n = len(c)
        self.nonbasic: List[int] = list(range(self.n))
        self.basic: List[int] = []
        self.T: List[List[Fraction]] = []
        self.rhs: List[Fraction] = []
        self.c: List[Fraction] = [Fraction(x) for x in c]
        self.z0 = Fraction(0)
        self.nvars = self.n
        self.pivots = 0

    def add_row(self, coeffs: Dict[int, Fraction], b) -> int:
        """Add sum a_j x_j <= b (structural indices); returns the slack id."""
        pos = {v: k for k, v in enumerate(self.nonbasic)}
        row = [Fraction(0)] * len(self.nonbasic)
        rhs = Fraction(b)
        where = {v: i for i, v in enumerate(self.basic)}
        for j, a in coeffs.items():
            a = Fraction(a)
            if not a:
                continue
            if j in pos:
                row[pos[j]] += a
            else:
                i = where[j]
                rhs -= a * self.rhs[i]
                Ti = self.T[i]
                for k, t in enumerate(Ti):
                    if t:
                        row[k] -= a * t
        s = self.nvars
        self.nvars += 1
        self.basic.append(s)
        self.T.append(row)
        self.rhs.append(rhs)
        return s

    def pivot(self, r: int, e: int) -> None:
        T, rhs = self.T, self.rhs
        prow = T[r]
        a = prow[e]
        inv = 1 / a
        # row r: x_B[r] = rhs - sum T x_N  ->  x_e = rhs/a - sum (T/a) x_N + (1/a) x_B[r]
        newrow = [t * inv for t in prow]
        newrow[e] = inv
        newrhs = rhs[r] * inv
        nz = [k for k, t in enumerate(newrow) if t]
        for i in range(len(T)):
            if i == r:
                continue
            Ti = T[i]
            f = Ti[e]
            if not f:
                continue
            for k in nz:
                Ti[k] -= f * newrow[k]
            Ti[e] = -f * inv
            rhs[i] -= f * newrhs
        f = self.c[e]
        if f:
            for k in nz:
                self.c[k] -= f * newrow[k]
            self.c[e] = -f * inv
            self.z0 += f * newrhs
        T[r] = newrow
        rhs[r] = newrhs
        self.basic[r], self.nonbasic[e] = self.nonbasic[e], self.basic[r]
        self.pivots += 1

    # After this many consecutive degenerate pivots both methods fall back to
    # Bland's rule until the objective moves again, which rules out cycling.
    DEGENERATE_STREAK = 30

    def primal(self) -> str:
        """Primal simplex from a feasible dictionary.

        Largest-coefficient entering rule, Bland's rule during degenerate
        stretches.
        """
        streak = 0
        while True:
            bland = streak >= self.DEGENERATE_STREAK
            e = None
            if bland:
                for k in sorted(range(len(self.nonbasic)), key=lambda k: self.nonbasic[k]):
                    if self.c[k] > 0:
                        e = k
                        break
            else:
                best_c = 0
                for k, ck in enumerate(self.c):
                    if ck > best_c:
                        best_c, e = ck, k
            if e is None:
                return OPTIMAL
            best = None
            for i, Ti in enumerate(self.T):
                if Ti[e] > 0:
                    key = (self.rhs[i] / Ti[e], self.basic[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            streak = streak + 1 if best[0][0] == 0 else 0
            self.pivot(best[1], e)

    def dual(self) -> str:
        """Dual simplex from a dual-feasible dictionary (same rule switching)."""
        streak = 0
        while True:
            bland = streak >= self.DEGENERATE_STREAK
            r = None
            if bland:
                for i in sorted(range(len(self.basic)), key=lambda i: self.basic[i]):
                    if self.rhs[i] < 0:
                        r = i
                        break
            else:
                worst = 0
                for i, b in enumerate(self.rhs):
                    if b < worst:
                        worst, r = b, i
            if r is None:
                return OPTIMAL
            Tr = self.T[r]
            best = None
            for k, t in enumerate(Tr):
                if t < 0:
                    key = (self.c[k] / t, self.nonbasic[k])
                    if best is None or key < best[0]:
                        best = (key, k)
            if best is None:
                return INFEASIBLE
            streak = streak + 1 if best[0][0] == 0 else 0
            self.pivot(r, best[1])

    def values(self) -> List[Fraction]:
        x = [Fraction(0)] * self.nvars
        for i, v in enumerate(self.basic):
            x[v] = self.rhs[i]
        return x

    def duals(self) -> List[Fraction]:
        """Multiplier of each added row (indexed by row order)."""
        y = [Fraction(0)] * (self.nvars - self.n)
        for k, v in enumerate(self.nonbasic):
            if v >= self.n:
                y[v - self.n] = -self.c[k]
        return y


@dataclass
class LPResult:
    status: str
    value: Optional[Fraction] = None
    x: Optional[List[Fraction]] = None
    duals: Optional[List[Fraction]] = None
    pivots: int = 0


def _solve_standard(A: List[Dict[int, Fraction]], b: List[Fraction], c: List[Fraction]) -> LPResult:
    """max c.x, A x <= b, x >= 0; two-phase when some b < 0."""
    n = len(c)
    if all(bi >= 0 for bi in b):
        D = Dictionary(c)
        for row, bi in zip(A, b):
            D.add_row(row, bi)
        status = D.primal()
        if status != OPTIMAL:
            return LPResult(status, pivots=D.pivots)
        return LPResult(OPTIMAL, D.z0, D.values()[:n], D.duals(), D.pivots)
    # phase one: max -x0 with x0 the last structural variable
    aux = n
    D = Dictionary([Fraction(0)] * n + [Fraction(-1)])
    for row, bi in zip(A, b):
        r = dict(row)
        r[aux] = Fraction(-1)
        D.add_row(r, bi)
    worst = min(range(len(b)), key=lambda i: (b[i], i))
    D.pivot(worst, D.nonbasic.index(aux))
    D.primal()
    if D.z0 < 0:
        return LPResult(INFEASIBLE, pivots=D.pivots)
    if aux in D.basic:
        # degenerate: x0 basic at zero; pivot it out on any nonzero entry
        r = D.basic.index(aux)
        k = next(k for k, t in enumerate(D.T[r]) if t)
        D.pivot(r, k)
    k = D.nonbasic.index(aux)
    for Ti in D.T:
        del Ti[k]
    del D.nonbasic[k]
    # rebuild objective in terms of the current nonbasics
    pos = {v: i for i, v in enumerate(D.basic)}
    newc = [Fraction(0)] * len(D.nonbasic)
    z0 = Fraction(0)
    for j, cj in enumerate(c):
        if not cj:
            continue
        if j in pos:
            i = pos[j]
            z0 += cj * D.rhs[i]
            for k2, t in enumerate(D.T[i]):
                newc[k2] -= cj * t
        else:
            newc[D.nonbasic.index(j)] += cj
    D.c, D.z0 = newc, z0
    status = D.primal()
    if status != OPTIMAL:
        return LPResult(status, pivots=D.pivots)
    vals = D.values()
    # slack ids were shifted by the auxiliary variable
    y = [Fraction(0)] * len(A)
    for k2, v in enumerate(D.nonbasic):
        if v > aux:
            y[v - aux - 1] = -D.c[k2]
    return LPResult(OPTIMAL, D.z0, vals[:n], y, D.pivots)


def simplex_solve(lp: RationalLP, verify: bool = True) -> LPResult:
    """Exact optimum of a RationalLP, with dual multipliers per row.

    Raises Infeasible or Unbounded.  With verify, feasibility, dual
    feasibility, complementary slackness and equal objectives are re-checked.
    """
    n = len(lp.names)
    # substitute x = lower + x' (or x = x+ - x- when free)
    cols: List[List[Tuple[int, int]]] = []  # original j -> [(std index, sign)]
    shift = [Fraction(0)] * n
    m = 0
    for j in range(n):
        if lp.lower[j] is None:
            cols.append([(m, 1), (m + 1, -1)])
            m += 2
        else:
            shift[j] = lp.lower[j]
            cols.append([(m, 1)])
            m += 1
    c = [Fraction(0)] * m
    const = Fraction(0)
    for j in range(n):
        for k, s in cols[j]:
            c[k] += s * lp.objective[j]
        const += lp.objective[j] * shift[j]
    A: List[Dict[int, Fraction]] = []
    b: List[Fraction] = []
    origin: List[Tuple[int, int]] = []  # std row -> (lp row or -1-j for bounds, sign)

    def std_row(coeffs: Dict[int, Fraction]) -> Tuple[Dict[int, Fraction], Fraction]:
        out: Dict[int, Fraction] = {}
        off = Fraction(0)
        for j, a in coeffs.items():
            off += a * shift[j]
            for k, s in cols[j]:
                out[k] = out.get(k, Fraction(0)) + s * a
        return out, off

    for i, (row, sense, rhs) in enumerate(lp.rows):
        r, off = std_row(row)
        if sense in (LE, EQ):
            A.append(r)
            b.append(rhs - off)
            origin.append((i, 1))
        if sense in (GE, EQ):
            A.append({k: -a for k, a in r.items()})
            b.append(off - rhs)
            origin.append((i, -1))
    for j in range(n):
        if lp.upper[j] is not None:
            r, off = std_row({j: Fraction(1)})
            A.append(r)
            b.append(lp.upper[j] - off)
            origin.append((-1 - j, 1))
    res = _solve_standard(A, b, c)
    if res.status == INFEASIBLE:
        raise Infeasible("LP is infeasible")
    if res.status == UNBOUNDED:
        raise Unbounded("LP is unbounded")
    x = []
    for j in range(n):
        x.append(shift[j] + sum((s * res.x[k] for k, s in cols[j]), Fraction(0)))
    y = [Fraction(0)] * len(lp.rows)
    for (i, s), yi in zip(origin, res.duals):
        if i >= 0:
            y[i] += s * yi
    out = LPResult(OPTIMAL, res.value + const, x, y, res.pivots)
    if verify:
        verify_solution(lp, out, dual_std=(A, b, c, res.duals, res.value))
    return out


def verify_solution(lp: RationalLP, res: LPResult, dual_std=None) -> None:
    """Exact primal feasibility and strong duality; raises LPError on failure."""
    x = res.x
    for j in range(len(lp.names)):
        if lp.lower[j] is not None and x[j] < lp.lower[j]:
            raise LPError(f"variable {lp.names[j]} below its lower bound")
        if lp.upper[j] is not None and x[j] > lp.upper[j]:
            raise LPError(f"variable {lp.names[j]} above its upper bound")
    for i, (row, sense, rhs) in enumerate(lp.rows):
        lhs = sum((a * x[j] for j, a in row.items()), Fraction(0))
        if (sense == LE and lhs > rhs) or (sense == GE and lhs < rhs) or (sense == EQ and lhs != rhs):
            raise LPError(f"row {i} violated")
    value = sum((cj * xj for cj, xj in zip(lp.objective, x)), Fraction(0))
    if value != res.value:
        raise LPError("objective mismatch")
    if dual_std is not None:
        A, b, c, y, std_value = dual_std
        if any(yi < 0 for yi in y):
            raise LPError("negative dual multiplier")
        reduced = list(c)
        for row, yi in zip(A, y):
            if yi:
                for k, a in row.items():
                    reduced[k] -= yi * a
        if any(r > 0 for r in reduced):
            raise LPError("dual infeasible")
        if sum((yi * bi for yi, bi in zip(y, b)), Fraction(0)) != std_value:
            raise LPError("duality gap")


# -- weight LPs ---------------------------------------------------------------


@dataclass
class OrbitPartition:
    blocks: List[List[int]]

    def __post_init__(self):
        self.blocks = sorted(sorted(b) for b in self.blocks)
        self.index: Dict[int, int] = {}
        for k, b in enumerate(self.blocks):
            for v in b:
                if v in self.index:
                    raise ValueError("orbit blocks overlap")
                self.index[v] = k

    @classmethod
    def trivial(cls, n: int) -> "OrbitPartition":
        return cls([[v] for v in range(n)])

    def sizes(self) -> List[int]:
        return sorted(len(b) for b in self.blocks)

    def check(self, n: int) -> None:
        if sorted(self.index) != list(range(n)):
            raise ValueError("orbit blocks do not cover the vertex set")


@dataclass
class WeightLPResult:
    bound: Fraction
    weights: List[Fraction]
    orbit_weights: List[Fraction]
    rows: List[frozenset]
    duals: List[Fraction]
    rounds: int
    pivots: int

    def to_json(self) -> dict:
        def q(x):
            return {"num": x.numerator, "den": x.denominator}
        cert = [{"set": sorted(s), "multiplier": q(y)} for s, y in zip(self.rows, self.duals) if y]
        return {"bound": q(self.bound), "weights": [q(w) for w in self.weights],
                "certificate": {"kind": "fractional_coloring", "sets": cert,
                                "rows": len(self.rows), "rounds": self.rounds}}


def _greedy_extend(adj: Sequence[int], start: int, order: Sequence[int]) -> int:
    m = start
    blocked = 0
    for v in bits(start):
        blocked |= adj[v] | (1 << v)
    for v in order:
        if not (blocked >> v) & 1:
            m |= 1 << v
            blocked |= adj[v] | (1 << v)
    return m


class WeightLP:
    """max sum of weights, one variable per orbit, every independent set <= rhs.

    fixed[v] pins vertex v to a given weight (it then drops out of the
    variables and shifts each row's right-hand side).
    """

    def __init__(self, g: UDGraph, orbits: Optional[OrbitPartition] = None,
                 fixed: Optional[Dict[int, Fraction]] = None, rhs=1, seed: int = 0):
        self.g = g
        self.orbits = orbits or OrbitPartition.trivial(g.n)
        self.orbits.check(g.n)
        self.fixed = {v: Fraction(w) for v, w in (fixed or {}).items()}
        self.rhs = Fraction(rhs)
        self.free_blocks = [k for k, b in enumerate(self.orbits.blocks)
                            if not any(v in self.fixed for v in b)]
        for k, b in enumerate(self.orbits.blocks):
            pinned = {self.fixed.get(v) for v in b}
            if len(pinned) > 1 and k not in self.free_blocks:
                raise ValueError("an orbit mixes fixed and free vertices")
        self.var_of_block = {k: i for i, k in enumerate(self.free_blocks)}
        _, self.adj = g.bitmasks()
        sizes = [len(self.orbits.blocks[k]) for k in self.free_blocks]
        self.dict = Dictionary([Fraction(s) for s in sizes])
        self.rows: List[frozenset] = []
        self.seen: set = set()
        self.rng = random.Random(seed)

    def add_set(self, mask: int) -> bool:
        if mask in self.seen:
            return False
        self.seen.add(mask)
        coeffs: Dict[int, Fraction] = {}
        b = self.rhs
        for v in bits(mask):
            if v in self.fixed:
                b -= self.fixed[v]
            else:
                j = self.var_of_block[self.orbits.index[v]]
                coeffs[j] = coeffs.get(j, Fraction(0)) + 1
        self.dict.add_row(coeffs, b)
        self.rows.append(frozenset(bits(mask)))
        return True

    def vertex_weights(self) -> List[Fraction]:
        vals = self.dict.values()
        w = []
        for v in range(self.g.n):
            if v in self.fixed:
                w.append(self.fixed[v])
            else:
                w.append(vals[self.var_of_block[self.orbits.index[v]]])
        return w

    def seed_rows(self) -> None:
        """One maximal set through every vertex, so the LP starts bounded."""
        n = self.g.n
        for v in range(n):
            order = list(range(n))
            self.rng.shuffle(order)
            self.add_set(_greedy_extend(self.adj, 1 << v, order))

    def separate(self, w: Sequence[Fraction], batch: int = 1) -> List[int]:
        """Maximal sets heavier than rhs under w; empty iff w is feasible.

        The exact maximum is always computed, so an empty answer certifies
        feasibility for the full LP.  With batch > 1 extra violators found
        by a threshold search are returned as well.
        """
        iw, scale = _integer_weights(w)
        limit = self.rhs * scale
        if limit.denominator != 1:
            raise LPError("rhs does not scale to an integer")
        limit = int(limit)
        value, mask = max_weight_masks(self.adj, iw, limit)
        if value <= limit:
            return []
        order = sorted(range(self.g.n), key=lambda v: (-w[v], v))
        cuts = [_greedy_extend(self.adj, mask, order)]
        if batch > 1:
            for _, m in heavy_masks(self.adj, iw, limit, batch):
                cuts.append(_greedy_extend(self.adj, m, order))
        return cuts

    def float_rows(self, batch: int = 20, max_rounds: int = 10000) -> List[int]:
        """Candidate rows from a floating-point run of the same row generation.

        Only the choice of rows comes from here; the exact solve that follows
        re-separates with exact weights, so float error can cost extra
        rounds but never correctness.
        """
        n = self.g.n
        nv = len(self.free_blocks)
        sizes = np.array([len(self.orbits.blocks[k]) for k in self.free_blocks], dtype=float)
        masks: List[int] = []
        seen: set = set()

        def push(m: int) -> None:
            if m not in seen:
                seen.add(m)
                masks.append(m)

        for v in range(n):
            order = list(range(n))
            self.rng.shuffle(order)
            push(_greedy_extend(self.adj, 1 << v, order))
        scale = 1 << 40
        for _ in range(max_rounds):
            data, ri, ci, b = [], [], [], []
            for r, m in enumerate(masks):
                rhs = float(self.rhs)
                for v in bits(m):
                    if v in self.fixed:
                        rhs -= float(self.fixed[v])
                    else:
                        data.append(1.0)
                        ri.append(r)
                        ci.append(self.var_of_block[self.orbits.index[v]])
                b.append(rhs)
            A = csr_matrix((data, (ri, ci)), shape=(len(masks), nv))
            res = linprog(-sizes, A_ub=A, b_ub=np.array(b), bounds=(0, None), method="highs")
            if res.status != 0:
                break
            x = res.x
            w = [float(self.fixed[v]) if v in self.fixed
                 else max(0.0, x[self.var_of_block[self.orbits.index[v]]]) for v in range(n)]
            iw = [int(round(wv * scale)) for wv in w]
            limit = int(float(self.rhs) * scale * (1 + 1e-9))
            value, mask = max_weight_masks(self.adj, iw, limit)
            if value <= limit:
                duals = -res.ineqlin.marginals
                slack = res.ineqlin.residual
                return [m for m, y, sl in zip(masks, duals, slack) if y > 1e-9 or sl < 1e-9]
            order = sorted(range(n), key=lambda v: (-w[v], v))
            push(_greedy_extend(self.adj, mask, order))
            for _, m in heavy_masks(self.adj, iw, limit, batch):
                push(_greedy_extend(self.adj, m, order))
        return masks

    def solve(self, max_rounds: int = 100000, rows: Optional[Iterable[int]] = None,
              batch: int = 20, float_hint: bool = True) -> WeightLPResult:
        """Exact optimum by row generation.

        float_hint seeds the exact solver with the rows a floating-point run
        ends up needing, which saves most of the exact pivots on larger LPs.
        """
        if rows is None and float_hint:
            rows = self.float_rows(batch)
        if rows is None:
            self.seed_rows()
        else:
            for m in rows:
                self.add_set(m)
        D = self.dict
        status = D.dual() if any(r < 0 for r in D.rhs) else OPTIMAL
        if status == INFEASIBLE:
            raise Infeasible("fixed weights already violate a row")
        rounds = 0
        while True:
            status = D.primal()
            if status == UNBOUNDED:
                raise Unbounded("initial rows do not bound the weights")
            if status == INFEASIBLE:
                raise Infeasible("weight LP infeasible")
            rounds += 1
            if rounds > max_rounds:
                raise LPError("row generation did not converge")
            w = self.vertex_weights()
            cuts = self.separate(w, batch)
            if not cuts:
                break
            for cut in cuts:
                self.add_set(cut)
            if D.dual() == INFEASIBLE:
                raise Infeasible("weight LP infeasible")
        w = self.vertex_weights()
        bound = sum(w, Fraction(0))
        duals = D.duals()
        self._certify(w, bound, duals)
        return WeightLPResult(bound, w, [D.values()[i] for i in range(len(self.free_blocks))],
                              list(self.rows), duals, rounds, D.pivots)

    def _certify(self, w, bound, duals) -> None:
        if any(x < 0 for x in w):
            raise LPError("negative weight")
        # dual side: multipliers on the generated sets cover every free orbit
        cover = [Fraction(0)] * len(self.free_blocks)
        for s, y in zip(self.rows, duals):
            if y < 0:
                raise LPError("negative multiplier")
            for v in s:
                if v not in self.fixed:
                    cover[self.var_of_block[self.orbits.index[v]]] += y
        for i, k in enumerate(self.free_blocks):
            if cover[i] < len(self.orbits.blocks[k]):
                raise LPError("dual solution does not cover an orbit")
        dual_value = sum((y * (self.rhs - sum((self.fixed.get(v, 0) for v in s), Fraction(0)))
                          for s, y in zip(self.rows, duals)), Fraction(0))
        fixed_total = sum(self.fixed.values(), Fraction(0))
        if dual_value != bound - fixed_total:
            raise LPError("primal and dual values differ")


def weight_lp_bound(g: UDGraph, orbits: Optional[OrbitPartition] = None, seed: int = 0) -> WeightLPResult:
    """Largest total weight with every independent set weighing at most 1."""
    return WeightLP(g, orbits, seed=seed).solve()


def fractional_chromatic(g: UDGraph, cap: int = 20000) -> Tuple[Fraction, List[Tuple[frozenset, Fraction]]]:
    """Exact chi_f from the covering LP over all maximal independent sets.

    Solved as its dual (the packing LP); the covering solution is read off
    the dual multipliers.  Raises RowCapExceeded past `cap` sets.
    """
    sets = []
    for s in enumerate_mis(g, WHOLE_GRAPH):
        sets.append(s.vertices)
        if len(sets) > cap:
            raise RowCapExceeded(f"more than {cap} maximal independent sets; use weight_lp_bound")
    lp = RationalLP()
    for v in range(g.n):
        lp.add_var(f"w{v}", obj=1)
    for s in sets:
        lp.add_row({v: 1 for v in s}, LE, 1)
    res = simplex_solve(lp)
    coloring = [(s, y) for s, y in zip(sets, res.duals) if y]
    cover = [Fraction(0)] * g.n
    for s, y in coloring:
        for v in s:
            cover[v] += y
    if any(c < 1 for c in cover) or sum(y for _, y in coloring) != res.value:
        raise LPError("covering certificate failed")
    return res.value, coloring


# -- geometric symmetry ---------------------------------------------------------


def _point_map(g: UDGraph, k: int, reflect: bool):
    """Rotation by 60k degrees about the graph's centre, optionally after a mirror."""
    center = g.center
    cos = [QuadExt(1), QuadExt(Fraction(1, 2)), QuadExt(Fraction(-1, 2)),
           QuadExt(-1), QuadExt(Fraction(-1, 2)), QuadExt(Fraction(1, 2))][k]
    sin = [QuadExt(0), QuadExt(0, Fraction(1, 2)), QuadExt(0, Fraction(1, 2)),
           QuadExt(0), QuadExt(0, Fraction(-1, 2)), QuadExt(0, Fraction(-1, 2))][k]

    def f(p: Point) -> Point:
        if reflect:
            # mirror across the horizontal line through the centre
            p = Point(p.x, center.y * 2 - p.y)
        return rotate_by(p, center, cos, sin)
    return f


def geometric_symmetries(g: UDGraph) -> List[List[int]]:
    """Vertex permutations induced by the 12 symmetries of the lattice about
    the centre that map the vertex set (with roles) onto itself and are
    verified graph automorphisms."""
    if g.center is None:
        return [list(range(g.n))]
    key_to_id = {v.point.key(): v.id for v in g.vertices}
    perms = []
    for reflect in (False, True):
        for k in range(6):
            f = _point_map(g, k, reflect)
            perm = []
            for v in g.vertices:
                img = key_to_id.get(f(v.point).key())
                if img is None or g.vertices[img].role != v.role:
                    break
                perm.append(img)
            else:
                if is_automorphism(g, perm):
                    perms.append(perm)
    return perms


def is_automorphism(g: UDGraph, perm: Sequence[int]) -> bool:
    if sorted(perm) != list(range(g.n)):
        return False
    for u in range(g.n):
        if {perm[v] for v in g.adj[u]} != g.adj[perm[u]]:
            return False
    return True


def shared_spindle_orbits(g: UDGraph) -> OrbitPartition:
    """Geometric orbits on the core, all spindle vertices in one block.

    This is the restricted LP behind the classical 57-vertex weights: one
    common weight for every spindle vertex.
    """
    geo = geometric_orbits(g)
    spindle = set(g.spindle_vertex_ids())
    blocks = [b for b in geo.blocks if not spindle & set(b)]
    if spindle:
        blocks.append(sorted(spindle))
    return OrbitPartition(blocks)


def geometric_orbits(g: UDGraph) -> OrbitPartition:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for perm in geometric_symmetries(g):
        for v, u in enumerate(perm):
            a, b = find(v), find(u)
            if a != b:
                parent[max(a, b)] = min(a, b)
    blocks: Dict[int, List[int]] = {}
    for v in range(g.n):
        blocks.setdefault(find(v), []).append(v)
    return OrbitPartition(list(blocks.values()))
