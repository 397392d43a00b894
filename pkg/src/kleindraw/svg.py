"""SVG rendering of a drawing on the fundamental square."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .drawing import Drawing
from .shifts import KleinShift, Point

SIZE = 400.0
MARGIN = 40.0
RADIUS = 9.0

_STYLE = """
  .side { stroke: #444; stroke-width: 1.5; fill: none; }
  .edge { stroke: #1f4e99; stroke-width: 2; fill: none; stroke-linecap: round; }
  .ghost { stroke: #9db3d6; stroke-width: 1.2; fill: none; opacity: 0.6; }
  .ghost-vertex { fill: #dde6f3; stroke: #9db3d6; }
  .vertex { fill: #fff; stroke: #111; stroke-width: 1.5; }
  .label { font: 10px sans-serif; text-anchor: middle; dominant-baseline: central; }
"""


def split_segment(p: Point, q: Point) -> list[tuple[Point, Point, KleinShift]]:
    """Pieces of the unfolded segment ``pq`` cut at the square grid, each with the deck transformation of its cell."""
    ts = {0.0, 1.0}
    for axis in (0, 1):
        lo, hi = sorted((p[axis], q[axis]))
        k = math.floor(lo) + 1
        while k < hi:
            ts.add((k - p[axis]) / (q[axis] - p[axis]))
            k += 1
    cuts = sorted(ts)
    out = []
    for t0, t1 in zip(cuts, cuts[1:]):
        if t1 - t0 <= 1e-12:
            continue
        a = (p[0] + (q[0] - p[0]) * t0, p[1] + (q[1] - p[1]) * t0)
        b = (p[0] + (q[0] - p[0]) * t1, p[1] + (q[1] - p[1]) * t1)
        mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        out.append((a, b, KleinShift(math.floor(mid[0]), math.floor(mid[1]))))
    return out


def side_crossings(d: Drawing) -> int:
    """Number of times the edges cross a side of the square."""
    return sum(len(split_segment(d.gamma[a], s.apply(d.gamma[b]))) - 1 for (a, b), s in d.delta.items())


class _Canvas:
    def __init__(self, reach: int) -> None:
        self.reach = reach
        self.scale = SIZE / (2 * reach + 1)
        self.width = SIZE + 2 * MARGIN

    def xy(self, p: Point) -> tuple[float, float]:
        x = MARGIN + (p[0] + self.reach) * self.scale
        y = MARGIN + (self.reach + 1 - p[1]) * self.scale
        return round(x, 3), round(y, 3)

    def line(self, p: Point, q: Point, cls: str) -> str:
        (x1, y1), (x2, y2) = self.xy(p), self.xy(q)
        return f'<line class="{cls}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>'


def _sides(c: _Canvas) -> list[str]:
    # bottom/top glued directly (same arrow direction), left/right glued with a flip (opposite directions)
    sides = [
        ((0, 0), (1, 0), "single"),
        ((0, 1), (1, 1), "single"),
        ((1, 0), (1, 1), "double"),
        ((0, 1), (0, 0), "double"),
    ]
    out = []
    for p, q, marker in sides:
        (x1, y1), (x2, y2) = c.xy(p), c.xy(q)
        mx, my = (x1 + x2) / 2, (y1 + y2) / 2
        out.append(f'<path class="side" d="M {x1} {y1} L {mx} {my} L {x2} {y2}" marker-mid="url(#{marker})"/>')
    return out


def render_svg(d: Drawing, copies: int = 1) -> str:
    reach = max(copies, 1) - 1
    c = _Canvas(reach)
    w = c.width
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:g}" height="{w:g}" viewBox="0 0 {w:g} {w:g}">',
        f"<style>{_STYLE}</style>",
        "<defs>",
        '<marker id="single" viewBox="0 0 10 10" refX="5" refY="5" markerWidth="8" markerHeight="8" orient="auto">'
        '<path d="M 0 0 L 10 5 L 0 10 z" fill="#444"/></marker>',
        '<marker id="double" viewBox="0 0 20 10" refX="10" refY="5" markerWidth="16" markerHeight="8" orient="auto">'
        '<path d="M 0 0 L 10 5 L 0 10 z M 10 0 L 20 5 L 10 10 z" fill="#444"/></marker>',
        "</defs>",
    ]
    segs = [(e, d.gamma[e[0]], s.apply(d.gamma[e[1]])) for e, s in sorted(d.delta.items())]
    if reach:
        parts.append('<g class="ghost-layer">')
        for a in range(-reach, reach + 1):
            for b in range(-reach, reach + 1):
                t = KleinShift(a, b)
                if t == (0, 0):
                    continue
                for _, p, q in segs:
                    parts.append(c.line(t.apply(p), t.apply(q), "ghost"))
                for p in d.gamma:
                    x, y = c.xy(t.apply(p))
                    parts.append(f'<circle class="ghost-vertex" cx="{x}" cy="{y}" r="{RADIUS * 0.6:g}"/>')
        parts.append("</g>")
    parts += _sides(c)
    parts.append('<g class="edges">')
    for (u, v), p, q in segs:
        for a, b, t in split_segment(p, q):
            tinv = t.inverse()
            line = c.line(tinv.apply(a), tinv.apply(b), "edge")
            parts.append(line.replace("<line ", f'<line data-edge="{u}-{v}" ', 1))
    parts.append("</g>")
    parts.append('<g class="vertices">')
    for v, p in enumerate(d.gamma):
        x, y = c.xy(p)
        parts.append(f'<circle class="vertex" cx="{x}" cy="{y}" r="{RADIUS:g}"/>')
        parts.append(f'<text class="label" x="{x}" y="{y}">{escape(str(v))}</text>')
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
