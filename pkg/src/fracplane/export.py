"""Serializers: JSON (exact), DIMACS and SVG for graphs and tilings.

JSON is the machine contract: rationals as {num, den}, coordinates as the
eight integers of QuadExt.to_json.  SVG output is for looking at only.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .udgraph import CORE, UDGraph, verify_embedding


def q(x) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def graph_json(g: UDGraph) -> dict:
    return {
        "name": g.name,
        "vertices": [{"id": v.id, "role": v.role, "weight": q(v.weight), "point": v.point.to_json(),
                      **({"lattice": list(v.lattice)} if v.lattice is not None else {})}
                     for v in g.vertices],
        "edges": [list(e) for e in g.edges()],
        "spindles": [{"id": s.id, "bottom": s.bottom, "top": s.top, "sides": list(s.sides),
                      "vertices": list(s.vertices), "direction": s.direction,
                      "orientation": s.orientation.value} for s in g.spindles],
        "merges": g.merges,
        "embedding": verify_embedding(g).to_json(),
    }


def dimacs(g: UDGraph) -> str:
    lines = [f"c {g.name}", f"p edge {g.n} {g.num_edges()}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def _svg(width: float, height: float, body: List[str], box: Tuple[float, float, float, float]) -> str:
    x0, y0, x1, y1 = box
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
            f'viewBox="{x0:.3f} {y0:.3f} {x1 - x0:.3f} {y1 - y0:.3f}">')
    return "\n".join([head, '<g transform="scale(1,-1)">'] + body + ["</g>", "</svg>"]) + "\n"


def _box(pts: Iterable[Tuple[float, float]], pad: float = 0.5) -> Tuple[float, float, float, float]:
    pts = list(pts) or [(0.0, 0.0)]
    xs = [p[0] for p in pts]
    ys = [-p[1] for p in pts]
    return min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad


def graph_svg(g: UDGraph, highlight: Optional[Iterable[int]] = None) -> str:
    pos = [v.point.approx() for v in g.vertices]
    hl = set(highlight or ())
    body = []
    for u, v in g.edges():
        (a, b), (c, d) = pos[u], pos[v]
        body.append(f'<line x1="{a:.4f}" y1="{b:.4f}" x2="{c:.4f}" y2="{d:.4f}" '
                    'stroke="#888" stroke-width="0.02"/>')
    for v in g.vertices:
        x, y = pos[v.id]
        fill = "#c00" if v.id in hl else ("#000" if v.role == CORE else "#36c")
        r = 0.08 if v.role == CORE else 0.04
        body.append(f'<circle cx="{x:.4f}" cy="{y:.4f}" r="{r}" fill="{fill}"/>')
    return _svg(800, 800, body, _box(pos))


_TILE_FILL = {"T1": "#fbb4ae", "T2": "#b3cde3", "T3": "#ccebc5", "T4": "#decbe4",
              "T5": "#fed9a6", "T6": "#ffffcc", "T7": "#e5d8bd", "T8": "#fddaec"}


def _plane(p) -> Tuple[float, float]:
    return (p[0] + p[1] / 2, p[1] * 0.8660254037844386)


def tiling_svg(tiling, labels: Optional[Dict[int, str]] = None) -> str:
    """Tiles filled by type; optional per-tile labels (e.g. final charges)."""
    body = []
    pts = []
    for ti, t in enumerate(tiling.tiles):
        cs = [_plane(c) for c in t.corners]
        pts += cs
        path = " ".join(f"{x:.4f},{y:.4f}" for x, y in cs)
        body.append(f'<polygon points="{path}" fill="{_TILE_FILL[t.type]}" fill-opacity="0.6" '
                    'stroke="#333" stroke-width="0.03"/>')
        cx = sum(x for x, _ in cs) / len(cs)
        cy = sum(y for _, y in cs) / len(cs)
        text = t.type if labels is None else labels.get(ti, t.type)
        body.append(f'<text x="{cx:.4f}" y="{-cy:.4f}" font-size="0.3" text-anchor="middle" '
                    f'transform="scale(1,-1)">{text}</text>')
    for p in tiling.core_index:
        x, y = _plane(p)
        member = tiling.core_index[p] in tiling.independent
        fill = "#000" if member else "#aaa"
        body.append(f'<circle cx="{x:.4f}" cy="{y:.4f}" r="{0.1 if member else 0.05}" fill="{fill}"/>')
    for p in tiling.phantoms:
        x, y = _plane(p)
        body.append(f'<circle cx="{x:.4f}" cy="{y:.4f}" r="0.08" fill="none" stroke="#000" '
                    'stroke-width="0.02"/>')
    return _svg(800, 800, body, _box(pts))


def csv_text(rows: Sequence[Dict[str, object]]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()
