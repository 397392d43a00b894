"""Straight-line drawings on the flat Klein bottle and their validation.

A drawing places every vertex in the half-open unit square and gives every
edge a deck transformation: for an edge stored as ``(low, high)`` the
segment runs from ``gamma[low]`` to ``delta[e].apply(gamma[high])``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import DegenerateAngles, NotIncident
from .graph import Edge, Graph, build_graph, edge_key, klein_grid
from .rotation import RotationSystem, State, trace_faces
from .shifts import IDENTITY, KleinShift, Point, fold

CROSSING_EPS = 1e-9
ANGLE_EPS = 1e-12


@dataclass
class Drawing:
    gamma: list[Point]
    delta: dict[Edge, KleinShift]
    fixed: list[bool] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.fixed:
            self.fixed = [False] * len(self.gamma)
        self.delta = {edge_key(*e): KleinShift(*s) for e, s in self.delta.items()}
        self._adj: list[list[int]] | None = None

    @property
    def n(self) -> int:
        return len(self.gamma)

    @property
    def edges(self) -> list[Edge]:
        return sorted(self.delta)

    @property
    def graph(self) -> Graph:
        return build_graph(self.n, self.delta)

    def neighbors(self, v: int) -> list[int]:
        if self._adj is None or len(self._adj) != self.n:
            adj: list[list[int]] = [[] for _ in range(self.n)]
            for a, b in self.delta:
                adj[a].append(b)
                adj[b].append(a)
            self._adj = [sorted(x) for x in adj]
        return self._adj[v]

    def copy(self) -> Drawing:
        return Drawing(list(self.gamma), dict(self.delta), list(self.fixed))

    def shift(self, v: int, u: int) -> KleinShift:
        """Deck transformation of edge ``v -> u``: ``u`` seen from ``v`` is at ``shift.apply(gamma[u])``."""
        try:
            s = self.delta[edge_key(v, u)]
        except KeyError:
            raise NotIncident(f"no edge between {v} and {u}") from None
        return s if v < u else s.inverse()

    def set_shift(self, v: int, u: int, s: KleinShift) -> None:
        self.delta[edge_key(v, u)] = s if v < u else s.inverse()

    def in_square(self) -> bool:
        return all(0.0 <= x < 1.0 and 0.0 <= y < 1.0 for x, y in self.gamma)

    def relabel(self, sigma: Sequence[int]) -> Drawing:
        """Vertex ``v`` becomes ``sigma[v]``; geometry unchanged."""
        gamma: list[Point] = [(0.0, 0.0)] * self.n
        fixed = [False] * self.n
        for v in range(self.n):
            gamma[sigma[v]] = self.gamma[v]
            fixed[sigma[v]] = self.fixed[v]
        out = Drawing(gamma, {}, fixed)
        for (a, b), s in self.delta.items():
            out.set_shift(sigma[a], sigma[b], s)
        return out


def rel_coord(d: Drawing, v: int, u: int) -> Point:
    """Position of neighbor ``u`` in ``v``'s chart."""
    return d.shift(v, u).apply(d.gamma[u])


def normalize_vertex(d: Drawing, v: int) -> Drawing:
    """Fold ``gamma[v]`` back into the unit square, re-deriving incident shifts (in place)."""
    q, t = fold(d.gamma[v])
    if t == IDENTITY:
        d.gamma[v] = q
        return d
    tinv = t.inverse()
    for u in d.neighbors(v):
        d.set_shift(v, u, tinv.compose(d.shift(v, u)))
    d.gamma[v] = q
    return d


# -- validation --------------------------------------------------------------


def _segments(d: Drawing) -> list[tuple[Edge, Point, Point]]:
    return [((a, b), d.gamma[a], s.apply(d.gamma[b])) for (a, b), s in sorted(d.delta.items())]


def _cross(o: Point, p: Point, q: Point) -> float:
    return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])


def _close(p: Point, q: Point, eps: float) -> bool:
    return abs(p[0] - q[0]) <= eps and abs(p[1] - q[1]) <= eps


def _on_segment(p: Point, a: Point, b: Point, eps: float) -> bool:
    """``p`` lies on segment ``ab`` within distance ``eps``."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    ll = dx * dx + dy * dy
    if ll == 0.0:
        return _close(p, a, eps)
    t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / ll
    t = min(1.0, max(0.0, t))
    cx, cy = a[0] + t * dx, a[1] + t * dy
    return math.hypot(p[0] - cx, p[1] - cy) <= eps


def segments_conflict(p1: Point, p2: Point, q1: Point, q2: Point, shared: bool, eps: float = CROSSING_EPS) -> bool:
    """Do two closed segments meet anywhere other than at one legitimately shared endpoint?

    With ``shared`` set, ``p1`` and ``q1`` are the same vertex; the segments
    then conflict only when they leave it in the same direction.
    """
    if shared:
        ux, uy = p2[0] - p1[0], p2[1] - p1[1]
        vx, vy = q2[0] - q1[0], q2[1] - q1[1]
        lu, lv = math.hypot(ux, uy), math.hypot(vx, vy)
        if lu == 0.0 or lv == 0.0:
            return True
        sin = (ux * vy - uy * vx) / (lu * lv)
        cos = (ux * vx + uy * vy) / (lu * lv)
        return abs(sin) <= eps and cos > 0
    lp = math.hypot(p2[0] - p1[0], p2[1] - p1[1]) or 1.0
    lq = math.hypot(q2[0] - q1[0], q2[1] - q1[1]) or 1.0
    d1 = _cross(p1, p2, q1) / lp
    d2 = _cross(p1, p2, q2) / lp
    d3 = _cross(q1, q2, p1) / lq
    d4 = _cross(q1, q2, p2) / lq
    if ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)) and (
        (d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps)
    ):
        return True
    return (
        _on_segment(q1, p1, p2, eps)
        or _on_segment(q2, p1, p2, eps)
        or _on_segment(p1, q1, q2, eps)
        or _on_segment(p2, q1, q2, eps)
    )


def _copies(d: Drawing) -> Iterator[KleinShift]:
    reach = 1 + max([0] + [max(abs(s.a), abs(s.b)) for s in d.delta.values()])
    for a in range(-reach - 1, reach + 2):
        for b in range(-reach - 1, reach + 2):
            yield KleinShift(a, b)


def _bbox(p: Point, q: Point) -> tuple[float, float, float, float]:
    return min(p[0], q[0]), min(p[1], q[1]), max(p[0], q[0]), max(p[1], q[1])


def crossings(d: Drawing, eps: float = CROSSING_EPS) -> list[tuple[Edge, Edge]]:
    """Every pair of edges (an edge may pair with itself) whose lifts meet improperly.

    Each edge is tested against every deck-translated copy of the other edge
    whose bounding box comes near it; endpoints shared by the same vertex in
    the same copy are allowed.
    """
    segs = _segments(d)
    copies = list(_copies(d))
    found: list[tuple[Edge, Edge]] = []
    for i in range(len(segs)):
        e, p1, p2 = segs[i]
        bx0, by0, bx1, by1 = _bbox(p1, p2)
        ends_e = ((e[0], p1), (e[1], p2))
        for j in range(i, len(segs)):
            f, q1, q2 = segs[j]
            hit = False
            for t in copies:
                if i == j and t == IDENTITY:
                    continue
                r1, r2 = t.apply(q1), t.apply(q2)
                cx0, cy0, cx1, cy1 = _bbox(r1, r2)
                if cx0 > bx1 + eps or cx1 < bx0 - eps or cy0 > by1 + eps or cy1 < by0 - eps:
                    continue
                shared = None
                for ve, pe in ends_e:
                    for vf, pf, other in ((f[0], r1, r2), (f[1], r2, r1)):
                        if ve == vf and _close(pe, pf, eps):
                            shared = (pe, other)
                if shared is not None:
                    pe, other = shared
                    far = p2 if pe is p1 else p1
                    if segments_conflict(pe, far, pe, other, True, eps):
                        hit = True
                elif segments_conflict(p1, p2, r1, r2, False, eps):
                    hit = True
                if hit:
                    break
            if hit:
                found.append((e, f))
    return found


def extract_rotation_system(d: Drawing, angle_eps: float = ANGLE_EPS) -> RotationSystem:
    """Counterclockwise order of edge directions at each vertex; twisted = odd horizontal shift."""
    g = d.graph
    pi = []
    for v in range(d.n):
        x0, y0 = d.gamma[v]
        dirs = []
        for u in g.adj[v]:
            x, y = rel_coord(d, v, u)
            if x == x0 and y == y0:
                raise DegenerateAngles(f"edge {v}-{u} has zero length")
            dirs.append((math.atan2(y - y0, x - x0), u))
        dirs.sort()
        for (t1, u1), (t2, u2) in zip(dirs, dirs[1:]):
            if t2 - t1 <= angle_eps:
                raise DegenerateAngles(f"edges {v}-{u1} and {v}-{u2} leave {v} at the same angle")
        if len(dirs) > 1 and dirs[0][0] + 2 * math.pi - dirs[-1][0] <= angle_eps:
            raise DegenerateAngles(f"edges at {v} overlap across the branch cut")
        pi.append([u for _, u in dirs])
    signs = {e: (-1 if s.a % 2 else 1) for e, s in d.delta.items()}
    return RotationSystem(g, pi, signs)


# -- faces -------------------------------------------------------------------


def walk_charts(d: Drawing, walk: Sequence[State]) -> list[KleinShift]:
    """Accumulated deck transformation at the tail of each step of a face walk.

    The first tail sits in its own square; ``charts[k].apply(gamma[tail_k])``
    is the unfolded position of the ``k``-th corner.
    """
    t = IDENTITY
    charts = []
    for u, v, _ in walk:
        charts.append(t)
        t = t.compose(d.shift(u, v))
    return charts


def face_polygons(d: Drawing, rs: RotationSystem | None = None) -> list[list[Point]]:
    """Unfolded boundary polygon of every face of the drawing's rotation system."""
    rs = rs if rs is not None else extract_rotation_system(d)
    out = []
    for walk in trace_faces(rs).faces:
        charts = walk_charts(d, walk)
        out.append([t.apply(d.gamma[u]) for t, (u, _, _) in zip(charts, walk)])
    return out


def is_convex(poly: Sequence[Point], strict: bool = False, eps: float = 1e-12) -> bool:
    """Every turn has the same orientation (zero turns allowed unless ``strict``)."""
    k = len(poly)
    if k < 3:
        return False
    sign = 0
    for i in range(k):
        c = _cross(poly[i - 1], poly[i], poly[(i + 1) % k])
        if abs(c) <= eps:
            if strict:
                return False
            continue
        s = 1 if c > 0 else -1
        if sign == 0:
            sign = s
        elif s != sign:
            return False
    # total turning of a convex simple polygon is exactly one full turn
    turn = 0.0
    for i in range(k):
        a, b, c = poly[i - 1], poly[i], poly[(i + 1) % k]
        ang = math.atan2(_cross(a, b, c), (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1]))
        turn += ang
    return sign != 0 and abs(abs(turn) - 2 * math.pi) < 1e-6


def klein_grid_drawing(m: int, n: int) -> Drawing:
    """Template drawing of :func:`klein_grid` with every vertex at a cell center."""
    g, _ = klein_grid(m, n)
    gamma = [((r + 0.5) / m, (c + 0.5) / n) for r in range(m) for c in range(n)]
    delta: dict[Edge, KleinShift] = {}
    for r in range(m):
        for c in range(n):
            v = r * n + c
            if r + 1 < m:
                delta[edge_key(v, v + n)] = IDENTITY
            else:
                u = n - 1 - c
                # right neighbor sits one square over, mirrored
                delta[edge_key(v, u)] = KleinShift(1, 0) if v < u else KleinShift(1, 0).inverse()
            up = r * n + (c + 1) % n
            if c + 1 < n:
                delta[edge_key(v, up)] = IDENTITY
            else:
                delta[edge_key(v, up)] = KleinShift(0, 1) if v < up else KleinShift(0, -1)
    assert set(delta) == set(g.edges)
    return Drawing(gamma, delta)
