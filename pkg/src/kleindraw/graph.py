"""Simple undirected graphs on vertices ``0..n-1``."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import TYPE_CHECKING, Iterable

import networkx as nx

from .errors import BadDimensions, DuplicateEdge, SelfLoop, UnknownName, VertexOutOfRange

if TYPE_CHECKING:
    from .rotation import RotationSystem

Edge = tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph.

    ``edges`` is kept sorted with every pair normalized to ``(low, high)``;
    ``adj[v]`` is the ascending neighbor tuple of ``v``.
    """

    n: int
    edges: tuple[Edge, ...]
    adj: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edge_set

    @property
    def edge_set(self) -> frozenset[Edge]:
        # cached on first access; dataclass is frozen so go through object.__setattr__
        try:
            return self.__dict__["_edge_set"]
        except KeyError:
            s = frozenset(self.edges)
            object.__setattr__(self, "_edge_set", s)
            return s

    @property
    def edge_index(self) -> dict[Edge, int]:
        try:
            return self.__dict__["_edge_index"]
        except KeyError:
            idx = {e: i for i, e in enumerate(self.edges)}
            object.__setattr__(self, "_edge_index", idx)
            return idx

    def vertices_with_edges(self) -> list[int]:
        return [v for v in range(self.n) if self.adj[v]]

    def subgraph(self, edges: Iterable[Edge]) -> Graph:
        """Spanning subgraph (same vertex set) on the given edges."""
        return build_graph(self.n, edges)

    def relabel(self, sigma: list[int] | tuple[int, ...]) -> Graph:
        """Graph with vertex ``v`` renamed ``sigma[v]``."""
        return build_graph(self.n, [(sigma[u], sigma[v]) for u, v in self.edges])

    def is_connected(self, removed: Iterable[int] = ()) -> bool:
        gone = set(removed)
        alive = [v for v in range(self.n) if v not in gone]
        if not alive:
            return True
        seen = {alive[0]}
        queue = deque([alive[0]])
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if w not in seen and w not in gone:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(alive)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


def build_graph(n: int, edges: Iterable[Edge]) -> Graph:
    """Validate and normalize an edge list into a :class:`Graph`."""
    if n < 0:
        raise VertexOutOfRange(f"negative vertex count {n}")
    seen: set[Edge] = set()
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRange(f"edge ({u},{v}) outside 0..{n - 1}")
        e = edge_key(u, v)
        if e in seen:
            raise DuplicateEdge(f"edge {e} listed twice")
        seen.add(e)
        adj[u].append(v)
        adj[v].append(u)
    return Graph(n, tuple(sorted(seen)), tuple(tuple(sorted(a)) for a in adj))


def complete_graph(n: int) -> Graph:
    return build_graph(n, combinations(range(n), 2))


def complete_bipartite(p: int, q: int) -> Graph:
    return build_graph(p + q, [(i, p + j) for i in range(p) for j in range(q)])


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def make_named(name: str) -> Graph:
    """``K5`` or ``K33`` (parts ``{0,1,2}`` and ``{3,4,5}``); case-insensitive."""
    key = name.strip().upper().replace(",", "").replace("_", "")
    if key == "K5":
        return complete_graph(5)
    if key == "K33":
        return complete_bipartite(3, 3)
    raise UnknownName(f"unknown graph name {name!r}")


def grid_vertex(r: int, c: int, n: int) -> int:
    return r * n + c


def klein_grid(m: int, n: int) -> tuple[Graph, RotationSystem]:
    """Square ``m x n`` grid wrapped on the flat Klein bottle.

    Column index ``r`` in ``0..m-1`` runs along x (crossing the x sides flips
    y, so those wraps carry sign -1); row index ``c`` in ``0..n-1`` runs along
    y.  Vertex ``(r, c)`` is labelled ``r*n + c`` and sits at
    ``((r+.5)/m, (c+.5)/n)`` in the template drawing; its rotation is
    (right, up, left, down).
    """
    from .rotation import RotationSystem

    if m < 2 or n < 2:
        raise BadDimensions(f"grid needs m >= 2 and n >= 2, got {m}x{n}")

    def right(r: int, c: int) -> tuple[int, int]:
        if r + 1 < m:
            return grid_vertex(r + 1, c, n), 1
        return grid_vertex(0, n - 1 - c, n), -1

    def left(r: int, c: int) -> tuple[int, int]:
        if r > 0:
            return grid_vertex(r - 1, c, n), 1
        return grid_vertex(m - 1, n - 1 - c, n), -1

    def up(r: int, c: int) -> tuple[int, int]:
        return grid_vertex(r, (c + 1) % n, n), 1

    def down(r: int, c: int) -> tuple[int, int]:
        return grid_vertex(r, (c - 1) % n, n), 1

    pi = []
    signs: dict[Edge, int] = {}
    edges = []
    for r in range(m):
        for c in range(n):
            v = grid_vertex(r, c, n)
            rot = []
            for step in (right, up, left, down):
                u, s = step(r, c)
                if u == v:
                    raise BadDimensions(f"{m}x{n} grid has a loop at vertex {v}")
                rot.append(u)
                e = edge_key(u, v)
                if e in signs:
                    if signs[e] != s:
                        raise BadDimensions(f"{m}x{n} grid is not simple (edge {e})")
                else:
                    signs[e] = s
                    edges.append(e)
            if len(set(rot)) != 4:
                raise BadDimensions(f"{m}x{n} grid is not simple at vertex {v}")
            pi.append(tuple(rot))
    try:
        g = build_graph(m * n, edges)
    except DuplicateEdge as exc:  # pragma: no cover - caught by the checks above
        raise BadDimensions(str(exc)) from exc
    if g.m != 2 * m * n:
        raise BadDimensions(f"{m}x{n} grid is not simple")
    return g, RotationSystem(g, tuple(pi), signs)


def is_planar(g: Graph) -> bool:
    return nx.check_planarity(g.to_networkx())[0]


def is_k_connected(g: Graph, k: int) -> bool:
    """Exhaustive check: no set of ``k-1`` vertices disconnects ``g``."""
    if k < 1:
        raise ValueError("k must be positive")
    if g.n <= k:
        # K_{k+1} is the smallest k-connected graph
        return False
    for cut in combinations(range(g.n), k - 1):
        if not g.is_connected(cut):
            return False
    return True
