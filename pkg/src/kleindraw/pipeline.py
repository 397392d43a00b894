"""Straight-line drawing of a Klein-bottle embedding from its rotation system.

Pipeline: extract a Kuratowski subdivision ``h``, match its smoothed rotation
system against the base database, copy the base drawing, lay chain vertices
on the straight base edges, route chords across faces of ``h``, drop every
bridge into its face and relax with barycentric (Tutte) sweeps.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .drawing import (
    CROSSING_EPS,
    Drawing,
    crossings,
    extract_rotation_system,
    normalize_vertex,
    rel_coord,
    walk_charts,
)
from .errors import (
    DrawingFailed,
    GraphIsPlanar,
    InvalidRotationSystem,
    NoBaseMatch,
    NoConvergence,
    NotKleinSystem,
    NotThreeConnected,
)
from .formats import EmbeddingRecord
from .graph import Edge, Graph, build_graph, edge_key, is_k_connected, is_planar
from .kuratowski import Subdivision, kuratowski_subgraph, reroute_local_bridges
from .rotation import (
    RotationSystem,
    State,
    apply_switches,
    count_faces,
    equivalent,
    euler_characteristic,
    induced_smoothed,
    is_balanced,
    restrict,
    trace_faces,
    walk_corners,
)
from .shifts import IDENTITY, KleinShift, Point, fold

log = logging.getLogger(__name__)

TUTTE_EPS = 1e-7
TUTTE_MAX_ITER = 10_000
MAX_ATTEMPTS = 16


@dataclass(frozen=True)
class BaseMatch:
    record: EmbeddingRecord
    phi: tuple[int, ...]  # core vertex -> record vertex
    switched: RotationSystem
    sub: Subdivision


def check_input(g: Graph, rs: RotationSystem) -> None:
    if rs.graph.n != g.n or rs.graph.edges != g.edges:
        raise InvalidRotationSystem("rotation system is not on the given graph")
    if is_planar(g):
        raise GraphIsPlanar("graph is planar")
    if not is_k_connected(g, 3):
        raise NotThreeConnected("graph is not 3-connected")
    if euler_characteristic(rs) != 0:
        raise NotKleinSystem("Euler characteristic is not 0")
    if is_balanced(rs):
        raise NotKleinSystem("system is balanced (a torus embedding)")


def _klein_restriction(rs: RotationSystem, h: Graph) -> bool:
    """Is the embedding ``rs`` induces on ``h`` (isolated vertices ignored) a cellular Klein-bottle one?"""
    used = h.vertices_with_edges()
    if not used or not h.is_connected([v for v in range(h.n) if not h.adj[v]]):
        return False
    hr = restrict(rs, h)
    if len(used) - h.m + count_faces(hr) != 0:
        return False
    keep = {v: i for i, v in enumerate(used)}
    signs = {edge_key(keep[a], keep[b]): hr.sign(a, b) for a, b in h.edges}
    compact = RotationSystem(
        build_graph(len(used), signs), [[keep[u] for u in hr.pi[v]] for v in used], signs
    )
    return not is_balanced(compact)


def klein_kuratowski_subgraph(g: Graph, rs: RotationSystem, order: Sequence[Edge] | None = None) -> Graph:
    """Kuratowski subgraph whose induced embedding stays on the Klein bottle where possible.

    Edges are deleted only while the remainder stays non-planar with a
    cellular, non-orientable induced embedding; plain deletion finishes.
    """
    kept = set(g.edges)
    vertices = list(range(g.n))
    if order is not None:
        first = {}
        for k, (a, b) in enumerate(order):
            first.setdefault(a, k)
            first.setdefault(b, k)
        vertices.sort(key=lambda v: first.get(v, 0))
    # whole vertices first: dropping a vertex from a disk face keeps the rest cellular
    for v in vertices:
        star = {e for e in kept if v in e}
        if not star:
            continue
        kept -= star
        h = build_graph(g.n, kept)
        if is_planar(h) or not _klein_restriction(rs, h):
            kept |= star
    changed = True
    while changed:
        # an edge kept early can become deletable once its neighbors are gone
        changed = False
        for e in order if order is not None else g.edges:
            if e not in kept:
                continue
            kept.discard(e)
            h = build_graph(g.n, kept)
            if is_planar(h) or not _klein_restriction(rs, h):
                kept.add(e)
            else:
                changed = True
    return kuratowski_subgraph(build_graph(g.n, kept), order)


def match_base(rs: RotationSystem, h: Graph, omega: Sequence[EmbeddingRecord]) -> BaseMatch:
    """Find the base record of ``h``'s smoothed system and switch ``rs`` to agree with its drawing.

    Switches are applied to the whole input system, so the smoothed system of
    the result equals the record drawing's own rotation system under ``phi``.
    """
    core_rs, sub = induced_smoothed(rs, h)
    for record in omega:
        if record.drawing is None or record.system.n != core_rs.n or record.system.graph.m != core_rs.graph.m:
            continue
        target = extract_rotation_system(record.drawing)
        wit = equivalent(core_rs, target, allow_relabel=True)
        if wit is not None:
            switched = apply_switches(rs, (sub.branch[i] for i in wit.switched))
            return BaseMatch(record, wit.phi, switched, sub)
    raise NoBaseMatch(f"smoothed {sub.kind} system matches no base embedding")


def place_base(d: Drawing, match: BaseMatch) -> dict[Edge, KleinShift]:
    """Copy the record's vertex positions onto the branch vertices; return core-edge shifts."""
    base = match.record.drawing
    assert base is not None
    for i, v in enumerate(match.sub.branch):
        d.gamma[v] = base.gamma[match.phi[i]]
        d.fixed[v] = True
    return {(i, j): base.shift(match.phi[i], match.phi[j]) for (i, j) in match.sub.chains}


def place_chains(d: Drawing, chains: dict[Edge, tuple[int, ...]], core_shifts: dict[Edge, KleinShift]) -> Drawing:
    """Space chain vertices evenly along the unfolded core edge and split its shift."""
    for e, path in chains.items():
        delta = core_shifts[e]
        u, w = path[0], path[-1]
        k = len(path) - 1
        ux, uy = d.gamma[u]
        wx, wy = delta.apply(d.gamma[w])
        charts = [IDENTITY]
        for i in range(1, k):
            t = i / k
            q, f = fold((ux + (wx - ux) * t, uy + (wy - uy) * t))
            d.gamma[path[i]] = q
            d.fixed[path[i]] = True
            charts.append(f)
        charts.append(delta)
        for i in range(k):
            d.set_shift(path[i], path[i + 1], charts[i].inverse().compose(charts[i + 1]))
    return d


def align_chain_signs(d: Drawing, sub: Subdivision, rs: RotationSystem) -> RotationSystem:
    """Switch chain vertices so every chain edge's sign matches the parity of its drawn shift."""
    flips = []
    for path in sub.chains.values():
        flipped = False
        for a, b in zip(path[:-1], path[1:-1]):
            drawn = -1 if d.shift(a, b).a % 2 else 1
            have = rs.sign(a, b) * (-1 if flipped else 1)
            flipped = drawn != have
            if flipped:
                flips.append(b)
    return apply_switches(rs, flips)


class _Faces:
    """Faces of ``h``'s induced embedding with unfolded charts of every corner."""

    def __init__(self, d: Drawing, rs: RotationSystem, h: Graph) -> None:
        self.rs = rs
        self.h = h
        hr = restrict(rs, h)
        self.walks = trace_faces(hr).faces
        self.charts = [walk_charts(d, w) for w in self.walks]
        self.corner: dict[tuple[int, int, int], tuple[int, int]] = {}
        for f, walk in enumerate(self.walks):
            for k, c in enumerate(walk_corners(hr, walk)):
                self.corner[c] = (f, k)

    def locate(self, v: int, x: int) -> tuple[int, int]:
        """Face and corner index of the ``h``-corner at ``v`` that holds the dart ``v -> x``."""
        p = self.rs.pi[v]
        i = p.index(x)
        d = len(p)
        before = next(p[(i - s) % d] for s in range(1, d) if self.h.has_edge(v, p[(i - s) % d]))
        after = next(p[(i + s) % d] for s in range(1, d) if self.h.has_edge(v, p[(i + s) % d]))
        try:
            return self.corner[(v, before, after)]
        except KeyError:
            raise InvalidRotationSystem(f"no face corner at {v} between {before} and {after}") from None

    def chart(self, loc: tuple[int, int]) -> KleinShift:
        return self.charts[loc[0]][loc[1]]

    def walk(self, f: int) -> tuple[State, ...]:
        return self.walks[f]


def place_h_chords(d: Drawing, rs: RotationSystem, h: Graph, faces: _Faces | None = None) -> Drawing:
    """Shift every edge joining two ``h``-vertices outside ``h``, routed across their common face."""
    faces = faces or _Faces(d, rs, h)
    in_h = [bool(h.adj[v]) for v in range(h.n)]
    for a, b in rs.graph.edges:
        if h.has_edge(a, b) or not (in_h[a] and in_h[b]):
            continue
        la, lb = faces.locate(a, b), faces.locate(b, a)
        if la[0] != lb[0]:
            raise InvalidRotationSystem(f"chord {a}-{b} joins corners of different faces")
        d.set_shift(a, b, faces.chart(la).inverse().compose(faces.chart(lb)))
    return d


def bridges(g: Graph, h: Graph) -> list[list[int]]:
    """Vertex sets of the components of ``g`` minus the vertices of ``h``."""
    outside = [not h.adj[v] for v in range(g.n)]
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if not outside[s] or seen[s]:
            continue
        seen[s] = True
        comp = [s]
        for u in comp:
            for x in g.adj[u]:
                if outside[x] and not seen[x]:
                    seen[x] = True
                    comp.append(x)
        out.append(sorted(comp))
    return out


def assign_face(d: Drawing, rs: RotationSystem, h: Graph, bridge: Sequence[int], faces: _Faces | None = None):
    """Face of a bridge and its starting geometry: ``(walk, point, {(x, y): shift x -> y})``."""
    faces = faces or _Faces(d, rs, h)
    members = set(bridge)
    attach = [(x, y) for x in bridge for y in rs.graph.adj[x] if y not in members]
    if not attach:
        raise InvalidRotationSystem(f"bridge {list(bridge)} has no attachment")
    locs = {(x, y): faces.locate(y, x) for x, y in attach}
    face_ids = {f for f, _ in locs.values()}
    if len(face_ids) != 1:
        raise InvalidRotationSystem(f"bridge {list(bridge)} attaches to {len(face_ids)} faces")
    f = face_ids.pop()
    walk = faces.walk(f)
    pts = [t.apply(d.gamma[u]) for t, (u, _, _) in zip(faces.charts[f], walk)]
    centroid = (math.fsum(p[0] for p in pts) / len(pts), math.fsum(p[1] for p in pts) / len(pts))
    q, t = fold(centroid)
    tinv = t.inverse()
    shifts: dict[tuple[int, int], KleinShift] = {}
    for x in bridge:
        for y in rs.graph.adj[x]:
            shifts[(x, y)] = tinv.compose(faces.chart(locs[(x, y)])) if y not in members else IDENTITY
    return walk, q, shifts


def relax(d: Drawing, eps: float = TUTTE_EPS, max_iter: int = TUTTE_MAX_ITER) -> int:
    """Gauss-Seidel barycentric sweeps over the free vertices, in place; returns the sweep count."""
    free = [v for v in range(d.n) if not d.fixed[v]]
    if not free:
        return 0
    worst = math.inf
    for sweep in range(1, max_iter + 1):
        worst = 0.0
        for v in free:
            nb = d.neighbors(v)
            pts = [rel_coord(d, v, u) for u in nb]
            x = math.fsum(p[0] for p in pts) / len(pts)
            y = math.fsum(p[1] for p in pts) / len(pts)
            x0, y0 = d.gamma[v]
            worst = max(worst, math.hypot(x - x0, y - y0))
            d.gamma[v] = (x, y)
            normalize_vertex(d, v)
        if worst < eps:
            return sweep
    raise NoConvergence(f"no convergence after {max_iter} sweeps (last move {worst:.3g})", d, max_iter, worst)


def tutte(d: Drawing, eps: float = TUTTE_EPS, max_iter: int = TUTTE_MAX_ITER) -> Drawing:
    relax(d, eps, max_iter)
    return d


@dataclass
class DrawReport:
    drawing: Drawing
    record: EmbeddingRecord
    sub: Subdivision
    sweeps: int
    attempts: int
    kuratowski_order: list[Edge] | None = None
    notes: list[str] = field(default_factory=list)


def _deletion_orders(g: Graph, attempts: int):
    yield None
    yield list(reversed(g.edges))
    rng = random.Random(0)
    for _ in range(attempts - 2):
        order = list(g.edges)
        rng.shuffle(order)
        yield order


def _attempt(g, rs, omega, order, eps, max_iter, crossing_eps) -> DrawReport:
    h = reroute_local_bridges(g, klein_kuratowski_subgraph(g, rs, order))
    match = match_base(rs, h, omega)
    d = Drawing([(0.0, 0.0)] * g.n, {e: IDENTITY for e in g.edges})
    core_shifts = place_base(d, match)
    place_chains(d, match.sub.chains, core_shifts)
    srs = align_chain_signs(d, match.sub, match.switched)
    faces = _Faces(d, srs, h)
    place_h_chords(d, srs, h, faces)
    for bridge in bridges(g, h):
        _, q, shifts = assign_face(d, srs, h, bridge, faces)
        for x in bridge:
            d.gamma[x] = q
        for (x, y), s in shifts.items():
            d.set_shift(x, y, s)
    sweeps = relax(d, eps, max_iter)
    found = crossings(d, crossing_eps)
    if found:
        raise DrawingFailed(f"{len(found)} crossing pairs, first {found[0]}")
    if equivalent(extract_rotation_system(d), rs) is None:
        raise DrawingFailed("drawn rotation system differs from the input")
    return DrawReport(d, match.record, match.sub, sweeps, 0, order)


def draw_report(
    g: Graph,
    rs: RotationSystem,
    omega: Sequence[EmbeddingRecord],
    eps: float = TUTTE_EPS,
    max_iter: int = TUTTE_MAX_ITER,
    crossing_eps: float = CROSSING_EPS,
    attempts: int = MAX_ATTEMPTS,
) -> DrawReport:
    """Run the pipeline, retrying other Kuratowski subgraphs when one does not lead to a valid drawing."""
    check_input(g, rs)
    last: Exception | None = None
    notes = []
    for k, order in enumerate(_deletion_orders(g, attempts), start=1):
        try:
            rep = _attempt(g, rs, omega, order, eps, max_iter, crossing_eps)
        except (NoBaseMatch, DrawingFailed, InvalidRotationSystem) as exc:
            log.info("attempt %d failed: %s", k, exc)
            notes.append(f"{type(exc).__name__}: {exc}")
            last = exc
            continue
        rep.attempts = k
        rep.notes = notes
        return rep
    assert last is not None
    raise last


def draw(g: Graph, rs: RotationSystem, omega: Sequence[EmbeddingRecord], **kw) -> Drawing:
    return draw_report(g, rs, omega, **kw).drawing
