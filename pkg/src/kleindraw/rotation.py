"""General (signed) rotation systems.

A rotation system stores, for every vertex, the cyclic order of its
neighbors and, for every edge, a sign: ``-1`` marks an edge that crosses the
orientation-reversing identification ("twisted"), ``+1`` one that does not.
Signs are stored once per undirected edge, aligned with ``graph.edges``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import DegreeTooLow, DisconnectedGraph, NotASubdivision, TooLarge, VertexOutOfRange
from .graph import Edge, Graph, build_graph, edge_key
from .kuratowski import Subdivision, smooth

State = tuple[int, int, int]  # (tail, head, orientation at tail)


class RotationSystem:
    """Per-vertex cyclic neighbor orders ``pi`` plus per-edge signs ``w``."""

    __slots__ = ("graph", "pi", "w")

    def __init__(
        self,
        graph: Graph,
        pi: Sequence[Sequence[int]],
        signs: Mapping[Edge, int] | Sequence[int] | None = None,
    ) -> None:
        if len(pi) != graph.n:
            raise ValueError(f"{len(pi)} rotations for {graph.n} vertices")
        pi_t = tuple(tuple(int(u) for u in p) for p in pi)
        for v, p in enumerate(pi_t):
            if len(p) != len(graph.adj[v]) or set(p) != set(graph.adj[v]):
                raise ValueError(f"rotation at {v} is not a permutation of its neighbors")
        if signs is None:
            w = (1,) * graph.m
        elif isinstance(signs, Mapping):
            norm = {edge_key(*e): s for e, s in signs.items()}
            if set(norm) != set(graph.edges):
                raise ValueError("signs must cover exactly the graph's edges")
            w = tuple(int(norm[e]) for e in graph.edges)
        else:
            w = tuple(int(s) for s in signs)
            if len(w) != graph.m:
                raise ValueError(f"{len(w)} signs for {graph.m} edges")
        if any(s not in (1, -1) for s in w):
            raise ValueError("edge signs must be +1 or -1")
        self.graph = graph
        self.pi = pi_t
        self.w = w

    @classmethod
    def _raw(cls, graph: Graph, pi: tuple[tuple[int, ...], ...], w: tuple[int, ...]) -> RotationSystem:
        obj = cls.__new__(cls)
        obj.graph = graph
        obj.pi = pi
        obj.w = w
        return obj

    @property
    def n(self) -> int:
        return self.graph.n

    def sign(self, u: int, v: int) -> int:
        return self.w[self.graph.edge_index[edge_key(u, v)]]

    def signs(self) -> dict[Edge, int]:
        return dict(zip(self.graph.edges, self.w))

    def successor(self, v: int, u: int) -> int:
        p = self.pi[v]
        return p[(p.index(u) + 1) % len(p)]

    def predecessor(self, v: int, u: int) -> int:
        p = self.pi[v]
        return p[p.index(u) - 1]

    def key(self) -> tuple[int, ...]:
        """Flattened comparison key: per vertex its degree, then ``2*u + twisted`` per entry."""
        idx = self.graph.edge_index
        out: list[int] = []
        for v, p in enumerate(self.pi):
            out.append(len(p))
            for u in p:
                out.append(2 * u + (self.w[idx[edge_key(u, v)]] < 0))
        return tuple(out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RotationSystem):
            return NotImplemented
        return self.graph.edges == other.graph.edges and self.pi == other.pi and self.w == other.w

    def __hash__(self) -> int:
        return hash((self.graph.n, self.pi, self.w))

    def __lt__(self, other: RotationSystem) -> bool:
        return self.key() < other.key()

    def __repr__(self) -> str:
        rows = []
        for v, p in enumerate(self.pi):
            rows.append(f"{v}:" + ",".join(f"{u}{'-' if self.sign(u, v) < 0 else ''}" for u in p))
        return f"RotationSystem({' '.join(rows)})"

    def rotated_equal(self, other: RotationSystem) -> bool:
        """Equal up to a cyclic rotation of each vertex's order."""
        if self.graph.edges != other.graph.edges or self.w != other.w:
            return False
        return all(_rotate_to_min(a) == _rotate_to_min(b) for a, b in zip(self.pi, other.pi))


def _rotate_to_min(p: Sequence[int]) -> tuple[int, ...]:
    if not p:
        return ()
    i = p.index(min(p))
    return tuple(p[i:]) + tuple(p[:i])


def _check_vertex(rs: RotationSystem, v: int) -> None:
    if not 0 <= v < rs.n:
        raise VertexOutOfRange(f"vertex {v} outside 0..{rs.n - 1}")


def apply_switches(rs: RotationSystem, vertices: Iterable[int]) -> RotationSystem:
    """Switch every vertex in ``vertices`` (reverse its order, negate incident signs)."""
    flags = [False] * rs.n
    for v in vertices:
        _check_vertex(rs, v)
        flags[v] = not flags[v]
    pi = tuple(p[::-1] if f else p for p, f in zip(rs.pi, flags))
    w = tuple(s * (-1 if flags[a] != flags[b] else 1) for s, (a, b) in zip(rs.w, rs.graph.edges))
    return RotationSystem._raw(rs.graph, pi, w)


def switch(rs: RotationSystem, v: int) -> RotationSystem:
    return apply_switches(rs, (v,))


def relabel(rs: RotationSystem, sigma: Sequence[int]) -> RotationSystem:
    """Rename vertex ``v`` to ``sigma[v]``."""
    g = rs.graph.relabel(sigma)
    pi: list[tuple[int, ...]] = [()] * rs.n
    for v, p in enumerate(rs.pi):
        pi[sigma[v]] = tuple(sigma[u] for u in p)
    idx = g.edge_index
    w = [0] * g.m
    for s, (a, b) in zip(rs.w, rs.graph.edges):
        w[idx[edge_key(sigma[a], sigma[b])]] = s
    return RotationSystem._raw(g, tuple(pi), tuple(w))


def restrict(rs: RotationSystem, h: Graph) -> RotationSystem:
    """Induced system on a spanning subgraph ``h``: keep only ``h``'s edges in each order."""
    pi = tuple(tuple(u for u in p if h.has_edge(u, v)) for v, p in enumerate(rs.pi))
    return RotationSystem(h, pi, [rs.sign(a, b) for a, b in h.edges])


def format_system(rs: RotationSystem) -> tuple[RotationSystem, tuple[bool, ...]]:
    """Switch-invariant normal form.

    A vertex whose successor of its minimum neighbor exceeds the predecessor
    is switched; every order is then rotated to start at its minimum
    neighbor.  Returns the normalized system and the per-vertex switch flags.
    """
    flags = []
    pi = []
    for v, p in enumerate(rs.pi):
        d = len(p)
        if d < 3:
            raise DegreeTooLow(f"vertex {v} has degree {d}; format needs degree >= 3")
        i = p.index(min(p))
        flip = p[(i + 1) % d] > p[i - 1]
        if flip:
            p = p[::-1]
            i = d - 1 - i
        flags.append(flip)
        pi.append(p[i:] + p[:i])
    w = tuple(s * (-1 if flags[a] != flags[b] else 1) for s, (a, b) in zip(rs.w, rs.graph.edges))
    return RotationSystem._raw(rs.graph, tuple(pi), w), tuple(flags)


# -- faces -------------------------------------------------------------------


@dataclass(frozen=True)
class FaceSet:
    """Result of face tracing.

    ``orbits`` holds every orbit of the (dart, orientation) successor map;
    each geometric face is traced twice, once per direction.  ``faces`` keeps
    one orbit per face, each rotated to start at its smallest state.
    """

    orbits: tuple[tuple[State, ...], ...]
    faces: tuple[tuple[State, ...], ...]

    def __len__(self) -> int:
        return len(self.faces)


def _successor_state(rs: RotationSystem, pos: list[dict[int, int]], state: State) -> State:
    u, v, s = state
    s2 = s * rs.sign(u, v)
    p = rs.pi[v]
    i = pos[v][u]
    x = p[(i + 1) % len(p)] if s2 > 0 else p[i - 1]
    return (v, x, s2)


def corner_key(rs: RotationSystem, prev: State, cur: State) -> tuple[int, int, int]:
    """Angular sector at ``cur``'s tail entered from ``prev``, as ``(v, a, b)`` with ``b`` after ``a``."""
    u = prev[0]
    v, x, s = cur
    return (v, u, x) if s > 0 else (v, x, u)


def walk_corners(rs: RotationSystem, walk: Sequence[State]) -> list[tuple[int, int, int]]:
    """Corner key at the tail of every step of a closed walk."""
    return [corner_key(rs, walk[k - 1], walk[k]) for k in range(len(walk))]


def trace_faces(rs: RotationSystem) -> FaceSet:
    pos = [{u: i for i, u in enumerate(p)} for p in rs.pi]
    seen: set[State] = set()
    orbits: list[tuple[State, ...]] = []
    for a, b in rs.graph.edges:
        for start in ((a, b, 1), (a, b, -1), (b, a, 1), (b, a, -1)):
            if start in seen:
                continue
            orbit = []
            st = start
            while st not in seen:
                seen.add(st)
                orbit.append(st)
                st = _successor_state(rs, pos, st)
            orbits.append(tuple(orbit))
    groups: dict[frozenset, list[tuple[State, ...]]] = {}
    for orbit in orbits:
        groups.setdefault(frozenset(walk_corners(rs, orbit)), []).append(orbit)
    faces = []
    for pair in groups.values():
        best = min(pair, key=min)
        i = best.index(min(best))
        faces.append(best[i:] + best[:i])
    faces.sort()
    return FaceSet(tuple(orbits), tuple(faces))


def count_faces(rs: RotationSystem) -> int:
    from .kernels import count_face_orbits

    orbits = count_face_orbits(*_trace_arrays(rs))
    return orbits // 2


def _trace_arrays(rs: RotationSystem):
    """Dart tables for the compiled tracer: dart ``2i`` is ``edges[i]`` forward, ``2i+1`` backward."""
    g = rs.graph
    m = g.m
    out_dart: dict[tuple[int, int], int] = {}
    for i, (a, b) in enumerate(g.edges):
        out_dart[(a, b)] = 2 * i
        out_dart[(b, a)] = 2 * i + 1
    nxt_plus = np.empty(2 * m, dtype=np.int64)
    nxt_minus = np.empty(2 * m, dtype=np.int64)
    for v, p in enumerate(rs.pi):
        d = len(p)
        for j, u in enumerate(p):
            incoming = out_dart[(u, v)]
            nxt_plus[incoming] = out_dart[(v, p[(j + 1) % d])]
            nxt_minus[incoming] = out_dart[(v, p[j - 1])]
    twisted = np.array([s < 0 for s in rs.w], dtype=np.int64)
    return nxt_plus, nxt_minus, twisted


def euler_characteristic(rs: RotationSystem) -> int:
    return rs.graph.n - rs.graph.m + count_faces(rs)


# -- balance -----------------------------------------------------------------


def balancing_switches(rs: RotationSystem) -> tuple[bool, ...] | None:
    """Vertex switches turning every sign positive, or ``None`` when unbalanced."""
    g = rs.graph
    if not g.is_connected():
        raise DisconnectedGraph("balance is defined here for connected graphs only")
    state = [0] * g.n
    if g.n:
        state[0] = 1
    stack = [0] if g.n else []
    while stack:
        u = stack.pop()
        for x in g.adj[u]:
            want = state[u] * rs.sign(u, x)
            if state[x] == 0:
                state[x] = want
                stack.append(x)
            elif state[x] != want:
                return None
    return tuple(s < 0 for s in state)


def is_balanced(rs: RotationSystem) -> bool:
    return balancing_switches(rs) is not None


MAX_FRUSTRATION_VERTICES = 20


def frustration(rs: RotationSystem) -> int:
    """Minimum number of negative edges over every switch set (brute force)."""
    n = rs.graph.n
    if n > MAX_FRUSTRATION_VERTICES:
        raise TooLarge(f"brute-force frustration limited to {MAX_FRUSTRATION_VERTICES} vertices")
    if n == 0 or rs.graph.m == 0:
        return 0
    # vertex 0 stays unswitched: switching everything is the identity on signs
    masks = np.arange(1 << (n - 1), dtype=np.int64) << 1
    neg = np.zeros(masks.shape, dtype=np.int64)
    for s, (a, b) in zip(rs.w, rs.graph.edges):
        neg += ((masks >> a) ^ (masks >> b) ^ (1 if s < 0 else 0)) & 1
    return int(neg.min())


# -- equivalence -------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """``relabel(apply_switches(a, switched), phi)`` equals ``b`` up to per-vertex rotation."""

    phi: tuple[int, ...]
    switched: frozenset[int]


def isomorphisms(a: Graph, b: Graph) -> Iterator[tuple[int, ...]]:
    """Every graph isomorphism ``a -> b`` (backtracking on degree-compatible images)."""
    if a.n != b.n or a.m != b.m or sorted(a.degrees()) != sorted(b.degrees()):
        return
    n = a.n
    order: list[int] = []
    seen = [False] * n
    for root in sorted(range(n), key=lambda v: -a.degree(v)):
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        for u in queue:
            order.append(u)
            for x in a.adj[u]:
                if not seen[x]:
                    seen[x] = True
                    queue.append(x)
    phi = [-1] * n
    used = [False] * n
    b_sets = [set(x) for x in b.adj]

    def extend(k: int) -> Iterator[tuple[int, ...]]:
        if k == n:
            yield tuple(phi)
            return
        v = order[k]
        dv = a.degree(v)
        for t in range(n):
            if used[t] or b.degree(t) != dv:
                continue
            ok = True
            for x in a.adj[v]:
                if phi[x] >= 0 and phi[x] not in b_sets[t]:
                    ok = False
                    break
            if ok:
                mapped = sum(1 for x in a.adj[v] if phi[x] >= 0)
                if sum(1 for y in b.adj[t] if used[y]) != mapped:
                    ok = False
            if not ok:
                continue
            phi[v] = t
            used[t] = True
            yield from extend(k + 1)
            phi[v] = -1
            used[t] = False

    yield from extend(0)


def _min_degree_ok(rs: RotationSystem) -> bool:
    return all(len(p) >= 3 for p in rs.pi)


def equivalent(a: RotationSystem, b: RotationSystem, allow_relabel: bool = False) -> Witness | None:
    """Switch-equivalence witness from ``a`` to ``b``, or ``None``.

    Without relabelling ``phi`` is the identity; otherwise candidate maps
    run over the graph isomorphisms and the switch set is read off the two
    normal forms.
    """
    if not (_min_degree_ok(a) and _min_degree_ok(b)):
        raise DegreeTooLow("equivalence test needs minimum degree >= 3")
    fb, sb = format_system(b)
    if allow_relabel:
        candidates: Iterable[tuple[int, ...]] = isomorphisms(a.graph, b.graph)
    else:
        if a.graph.edges != b.graph.edges or a.n != b.n:
            return None
        candidates = (tuple(range(a.n)),)
    for phi in candidates:
        ar = relabel(a, phi) if allow_relabel else a
        fa, sa = format_system(ar)
        if fa == fb:
            switched = frozenset(v for v in range(a.n) if sa[phi[v]] != sb[phi[v]])
            return Witness(phi, switched)
    return None


# -- smoothing ---------------------------------------------------------------


def induced_smoothed(rs: RotationSystem, h: Graph) -> tuple[RotationSystem, Subdivision]:
    """Rotation system induced on the branch vertices of a subdivision ``h``.

    Each chain becomes one core edge whose sign is the product of the chain's
    signs; a branch vertex keeps the order of its ``h``-edges from ``rs``.
    """
    if h.n != rs.n or not h.edge_set <= rs.graph.edge_set:
        raise NotASubdivision("h is not a subgraph of the rotation system's graph")
    sub = smooth(h)
    target: dict[tuple[int, int], int] = {}
    signs: dict[Edge, int] = {}
    for (i, j), path in sub.chains.items():
        target[(path[0], path[1])] = j
        target[(path[-1], path[-2])] = i
        prod = 1
        for x, y in zip(path, path[1:]):
            prod *= rs.sign(x, y)
        signs[(i, j)] = prod
    pi = []
    for b in sub.branch:
        pi.append(tuple(target[(b, u)] for u in rs.pi[b] if (b, u) in target))
    return RotationSystem(sub.core, pi, signs), sub


def planar_k4() -> RotationSystem:
    """Tetrahedron with its plane rotation (all signs positive)."""
    g = build_graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    # vertex 0 in the middle of triangle 1-2-3 (counterclockwise)
    pi = [(1, 2, 3), (0, 3, 2), (0, 1, 3), (0, 2, 1)]
    return RotationSystem(g, pi)
