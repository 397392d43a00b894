"""Kuratowski subdivisions: extraction, smoothing and chain lookup.

A subgraph ``h`` is represented as a spanning :class:`Graph` on the same
vertex set as its host; vertices of degree 0 in ``h`` are not part of it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GraphIsPlanar, NotAChainVertex, NotASubdivision
from .graph import Edge, Graph, build_graph, edge_key, is_planar


@dataclass(frozen=True)
class Subdivision:
    """A smoothed Kuratowski subdivision.

    ``branch[i]`` is the host label of core vertex ``i`` (ascending host
    order).  ``chains`` maps each core edge ``(i, j)``, ``i < j``, to the host
    path from ``branch[i]`` to ``branch[j]``, endpoints included.
    """

    h: Graph
    core: Graph
    branch: tuple[int, ...]
    chains: dict[Edge, tuple[int, ...]]

    @property
    def kind(self) -> str:
        return "K5" if self.core.n == 5 else "K33"

    def interior(self, e: Edge) -> tuple[int, ...]:
        return self.chains[e][1:-1]

    def core_label(self) -> dict[int, int]:
        return {b: i for i, b in enumerate(self.branch)}


def kuratowski_subgraph(g: Graph, order: list[Edge] | None = None) -> Graph:
    """Edge-minimal non-planar spanning subgraph of ``g``.

    Edges are probed for deletion in ``order`` (sorted by default); one pass
    suffices because a subgraph of a planar graph stays planar, so an edge
    found critical never stops being critical.
    """
    if is_planar(g):
        raise GraphIsPlanar("graph is planar; no Kuratowski subgraph")
    kept = set(g.edges)
    for e in order if order is not None else g.edges:
        kept.discard(e)
        if is_planar(build_graph(g.n, kept)):
            kept.add(e)
    return build_graph(g.n, kept)


def _is_k5(core: Graph) -> bool:
    return core.n == 5 and core.m == 10


def _is_k33(core: Graph) -> bool:
    if core.n != 6 or core.m != 9 or any(d != 3 for d in core.degrees()):
        return False
    side = [-1] * 6
    side[0] = 0
    stack = [0]
    while stack:
        u = stack.pop()
        for w in core.adj[u]:
            if side[w] == -1:
                side[w] = 1 - side[u]
                stack.append(w)
            elif side[w] == side[u]:
                return False
    return -1 not in side and side.count(0) == 3


def _walk_chain(h: Graph, start: int, first: int) -> tuple[int, ...]:
    """Follow degree-2 vertices from ``start`` through ``first`` to the next branch vertex."""
    path = [start, first]
    prev, cur = start, first
    while len(h.adj[cur]) == 2:
        a, b = h.adj[cur]
        nxt = b if a == prev else a
        prev, cur = cur, nxt
        path.append(cur)
        if cur == start and len(h.adj[start]) == 2:
            break
        if len(path) > h.n + 1:
            raise NotASubdivision("chain does not terminate")
    return tuple(path)


def smooth(h: Graph) -> Subdivision:
    """Replace every maximal degree-2 path of ``h`` by a single core edge."""
    degs = h.degrees()
    if any(d == 1 for d in degs):
        raise NotASubdivision("subgraph has a vertex of degree 1")
    branch = tuple(v for v in range(h.n) if degs[v] >= 3)
    if len(branch) not in (5, 6):
        raise NotASubdivision(f"{len(branch)} branch vertices; expected 5 or 6")
    label = {b: i for i, b in enumerate(branch)}
    chains: dict[Edge, tuple[int, ...]] = {}
    covered: set[int] = set(branch)
    for b in branch:
        for first in h.adj[b]:
            path = _walk_chain(h, b, first)
            end = path[-1]
            if end not in label:
                raise NotASubdivision("chain ends outside the branch set")
            if end == b:
                raise NotASubdivision(f"chain from {b} returns to itself")
            i, j = label[b], label[end]
            if i > j:
                continue
            e = (i, j)
            if e in chains:
                raise NotASubdivision(f"two chains join branch vertices {b} and {end}")
            chains[e] = path
            covered.update(path)
    stray = [v for v in range(h.n) if degs[v] and v not in covered]
    if stray:
        raise NotASubdivision(f"vertices {stray} lie on no chain")
    core = build_graph(len(branch), chains)
    if not (_is_k5(core) or _is_k33(core)):
        raise NotASubdivision("smoothed graph is neither K5 nor K3,3")
    return Subdivision(h, core, branch, chains)


def chain_endpoints(h: Graph, v: int) -> tuple[int, int, tuple[int, ...]]:
    """Branch endpoints ``(u, w)`` of the chain through degree-2 vertex ``v`` and its path.

    The path runs from the lower-labelled endpoint ``u`` to ``w``;
    ``path.index(v)`` is the number of chain edges between ``u`` and ``v``.
    """
    if not 0 <= v < h.n or len(h.adj[v]) != 2:
        raise NotAChainVertex(f"vertex {v} does not have degree 2 in the subgraph")
    a, b = h.adj[v]
    left = _walk_chain(h, v, a)
    right = _walk_chain(h, v, b)
    if left[-1] == v or len(h.adj[left[-1]]) < 3 or len(h.adj[right[-1]]) < 3:
        raise NotAChainVertex(f"vertex {v} lies on a cycle without branch vertices")
    path = tuple(reversed(left[1:])) + (v,) + right[1:]
    if path[0] > path[-1]:
        path = path[::-1]
    return path[0], path[-1], path


def subdivide(chains: dict[Edge, tuple[int, ...]], n: int) -> Graph:
    """Inverse of :func:`smooth`: host graph on ``n`` vertices from explicit chain paths."""
    edges: set[Edge] = set()
    for path in chains.values():
        for a, b in zip(path, path[1:]):
            edges.add(edge_key(a, b))
    return build_graph(n, edges)


def _bridge_list(g: Graph, h: Graph) -> list[tuple[list[int], set[int]]]:
    """Bridges of ``h`` in ``g`` as ``(inner vertices, attachment vertices)``; chords have no inner vertices."""
    in_h = [bool(h.adj[v]) for v in range(g.n)]
    out: list[tuple[list[int], set[int]]] = []
    for a, b in g.edges:
        if in_h[a] and in_h[b] and not h.has_edge(a, b):
            out.append(([], {a, b}))
    seen = [False] * g.n
    for s in range(g.n):
        if in_h[s] or seen[s]:
            continue
        seen[s] = True
        comp = [s]
        attach: set[int] = set()
        for u in comp:
            for x in g.adj[u]:
                if in_h[x]:
                    attach.add(x)
                elif not seen[x]:
                    seen[x] = True
                    comp.append(x)
        out.append((comp, attach))
    return out


def _path_through(g: Graph, inner: list[int], a: int, c: int) -> list[int]:
    """Shortest path ``a .. c`` whose interior uses only ``inner`` vertices."""
    allowed = set(inner)
    prev = {a: a}
    queue = [a]
    for u in queue:
        for x in g.adj[u]:
            if x == c and u != a:
                path = [c, u]
                while path[-1] != a:
                    path.append(prev[path[-1]])
                return path[::-1]
            if x in allowed and x not in prev:
                prev[x] = u
                queue.append(x)
    raise NotASubdivision(f"no bridge path from {a} to {c}")


def reroute_local_bridges(g: Graph, h: Graph, max_rounds: int | None = None) -> Graph:
    """Reroute chains through every bridge that attaches to a single chain only.

    Such a bridge would be squeezed onto the straight segment that carries
    the chain.  The segment between its extreme attachments is replaced by a
    path through the bridge; branch vertices never change.
    """
    rounds = max_rounds if max_rounds is not None else 2 * g.m
    seen = {h.edge_set}
    for _ in range(rounds):
        sub = smooth(h)
        where: dict[int, dict[Edge, int]] = {}
        for e, path in sub.chains.items():
            for i, v in enumerate(path):
                where.setdefault(v, {})[e] = i
        for inner, attach in _bridge_list(g, h):
            common = set.intersection(*(set(where[v]) for v in attach))
            if not common:
                continue
            e = min(common)
            path = sub.chains[e]
            idx = sorted(where[v][e] for v in attach)
            i0, i1 = idx[0], idx[-1]
            a, c = path[i0], path[i1]
            detour = [a, c] if not inner else _path_through(g, inner, a, c)
            edges = set(h.edges)
            edges.difference_update(edge_key(x, y) for x, y in zip(path[i0:i1], path[i0 + 1 : i1 + 1]))
            edges.update(edge_key(x, y) for x, y in zip(detour, detour[1:]))
            nxt = build_graph(h.n, edges)
            if nxt.edge_set in seen:
                # rerouting would cycle (a segment vertex feeding the bridge back)
                return h
            seen.add(nxt.edge_set)
            h = nxt
            break
        else:
            return h
    return h
