"""Exhaustive enumeration of unlabelled Klein-bottle embeddings of small graphs.

Every combination of edge-sign mask and per-vertex rotation (minimum
neighbor pinned first) is face-traced by the compiled kernel; systems with
Euler characteristic 0 are reduced to a canonical form, the lexicographic
minimum of the normal form over every relabelling.  Systems reached with the
all-positive mask are orientable (torus) embeddings and are reported
separately as false positives.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Sequence

import numpy as np

from . import kernels
from .errors import DegreeTooLow, DisconnectedGraph, TooLarge
from .graph import Graph, build_graph, edge_key
from .rotation import RotationSystem, format_system

log = logging.getLogger(__name__)

MAX_CANONICAL_VERTICES = 8

Key = tuple[int, ...]


def labelled_upper_bound(g: Graph) -> int:
    """``2**m`` sign choices times ``(d-1)!`` cyclic orders per vertex."""
    bound = 2 ** g.m
    for d in g.degrees():
        bound *= math.factorial(max(d - 1, 0))
    return bound


# -- canonical forms ---------------------------------------------------------


def _sign_table(rs: RotationSystem) -> dict[tuple[int, int], int]:
    table = {}
    for s, (a, b) in zip(rs.w, rs.graph.edges):
        table[(a, b)] = s
        table[(b, a)] = s
    return table


def _formatted_key(pi: Sequence[Sequence[int]], sign: dict[tuple[int, int], int], sigma: Sequence[int]) -> Key:
    """Key of ``format_system(relabel(rs, sigma))`` without building the system."""
    n = len(pi)
    inv = [0] * n
    flip = [False] * n
    rows: list[list[int]] = [[]] * n
    for v in range(n):
        t = sigma[v]
        inv[t] = v
        p = [sigma[u] for u in pi[v]]
        d = len(p)
        i = p.index(min(p))
        if p[(i + 1) % d] > p[i - 1]:
            flip[v] = True
            p.reverse()
            i = d - 1 - i
        rows[t] = p[i:] + p[:i]
    key: list[int] = []
    for t in range(n):
        v = inv[t]
        row = rows[t]
        key.append(len(row))
        fv = flip[v]
        for x in row:
            u = inv[x]
            twisted = sign[(v, u)] < 0
            if fv != flip[u]:
                twisted = not twisted
            key.append(2 * x + twisted)
    return tuple(key)


def system_from_key(key: Key) -> RotationSystem:
    """Inverse of :meth:`RotationSystem.key`."""
    pi: list[tuple[int, ...]] = []
    signs: dict[tuple[int, int], int] = {}
    i = 0
    v = 0
    while i < len(key):
        d = key[i]
        row = key[i + 1 : i + 1 + d]
        pi.append(tuple(x >> 1 for x in row))
        for x in row:
            signs[edge_key(v, x >> 1)] = -1 if x & 1 else 1
        i += 1 + d
        v += 1
    g = build_graph(len(pi), signs)
    return RotationSystem(g, pi, signs)


def _check_canonical_input(rs: RotationSystem) -> None:
    if rs.n > MAX_CANONICAL_VERTICES:
        raise TooLarge(f"canonical form limited to {MAX_CANONICAL_VERTICES} vertices")
    if any(len(p) < 3 for p in rs.pi):
        raise DegreeTooLow("canonical form needs minimum degree >= 3")


def canonical_key(rs: RotationSystem) -> tuple[Key, tuple[int, ...]]:
    """Minimum formatted key over all relabellings, with one minimizing relabelling."""
    _check_canonical_input(rs)
    sign = _sign_table(rs)
    best: Key | None = None
    best_sigma: tuple[int, ...] = ()
    for sigma in permutations(range(rs.n)):
        k = _formatted_key(rs.pi, sign, sigma)
        if best is None or k < best:
            best, best_sigma = k, sigma
    assert best is not None
    return best, best_sigma


def canonical_form(rs: RotationSystem) -> RotationSystem:
    return system_from_key(canonical_key(rs)[0])


def canonical_form_with_map(rs: RotationSystem) -> tuple[RotationSystem, tuple[int, ...]]:
    """Canonical system and a relabelling ``sigma`` with ``format(relabel(rs, sigma))`` equal to it."""
    key, sigma = canonical_key(rs)
    return system_from_key(key), sigma


class _Canonicalizer:
    """Memoized canonical keys: a new class fills in every relabelled normal form at once."""

    def __init__(self, n: int) -> None:
        self.perms = list(permutations(range(n)))
        self.identity = tuple(range(n))
        self.memo: dict[Key, Key] = {}
        self.classes = 0

    def __call__(self, pi: Sequence[Sequence[int]], sign: dict[tuple[int, int], int]) -> Key:
        k = _formatted_key(pi, sign, self.identity)
        hit = self.memo.get(k)
        if hit is not None:
            return hit
        keys = [_formatted_key(pi, sign, s) for s in self.perms]
        best = min(keys)
        for kk in keys:
            self.memo[kk] = best
        self.classes += 1
        return best


# -- enumeration -------------------------------------------------------------


def rotation_options(g: Graph) -> list[list[tuple[int, ...]]]:
    """Per vertex: ``[u_min] + p`` for every permutation ``p`` of the other neighbors, lexicographically."""
    out = []
    for v in range(g.n):
        nb = g.adj[v]
        out.append([(nb[0],) + p for p in permutations(nb[1:])])
    return out


def sign_masks(g: Graph, mode: str = "all") -> list[int]:
    """Edge-sign masks to scan; bit ``i`` twists ``g.edges[i]``.

    ``all`` is every mask; ``half`` keeps masks with at most ``ceil(m/2)``
    twisted edges (frustration never exceeds half the edges); ``cotree``
    keeps masks that leave a BFS spanning tree untwisted (one mask per
    switching class).
    """
    m = g.m
    if mode == "all":
        return list(range(1 << m))
    if mode == "half":
        cap = -(-m // 2)
        return [x for x in range(1 << m) if x.bit_count() <= cap]
    if mode == "cotree":
        tree = set()
        seen = {0}
        queue = [0]
        for u in queue:
            for x in g.adj[u]:
                if x not in seen:
                    seen.add(x)
                    queue.append(x)
                    tree.add(edge_key(u, x))
        free = [i for i, e in enumerate(g.edges) if e not in tree]
        masks = []
        for r in range(len(free) + 1):
            for chosen in combinations(free, r):
                masks.append(sum(1 << i for i in chosen))
        return sorted(masks)
    raise ValueError(f"unknown mask mode {mode!r}")


def _kernel_tables(g: Graph, options: list[list[tuple[int, ...]]]):
    out_dart: dict[tuple[int, int], int] = {}
    for i, (a, b) in enumerate(g.edges):
        out_dart[(a, b)] = 2 * i
        out_dart[(b, a)] = 2 * i + 1
    opt_in, opt_plus, opt_minus = [], [], []
    for v, rots in enumerate(options):
        for p in rots:
            d = len(p)
            for j, u in enumerate(p):
                opt_in.append(out_dart[(u, v)])
                opt_plus.append(out_dart[(v, p[(j + 1) % d])])
                opt_minus.append(out_dart[(v, p[j - 1])])
    degrees = np.array(g.degrees(), dtype=np.int64)
    n_options = np.array([len(r) for r in options], dtype=np.int64)
    return degrees, n_options, np.array(opt_in, np.int64), np.array(opt_plus, np.int64), np.array(opt_minus, np.int64)


def _scan_chunk(args):
    backend, tables, masks, m, target = args
    mod = kernels.backend_module(backend)
    return mod.scan_euler(*tables, np.asarray(masks, dtype=np.int64), m, target)


@dataclass(frozen=True)
class EnumerationResult:
    graph: Graph
    all: frozenset[RotationSystem]
    false_positives: frozenset[RotationSystem]
    scanned: int = 0
    survivors: int = 0
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def klein(self) -> list[RotationSystem]:
        """Genuine Klein-bottle embeddings, sorted by key."""
        return sorted(self.all - self.false_positives, key=RotationSystem.key)


def enumerate_embeddings(
    g: Graph,
    masks: str | Sequence[int] = "all",
    euler: int = 0,
    backend: str | None = None,
    workers: int = 1,
) -> EnumerationResult:
    """Canonical forms of every rotation system of ``g`` with the given Euler characteristic.

    ``masks`` is a mode for :func:`sign_masks` or an explicit mask list.
    ``workers > 1`` splits the mask list across processes; the merged sets
    are identical to a single-process run.
    """
    if g.n > MAX_CANONICAL_VERTICES:
        raise TooLarge(f"enumeration limited to {MAX_CANONICAL_VERTICES} vertices")
    if any(d < 3 for d in g.degrees()):
        raise DegreeTooLow("enumeration needs minimum degree >= 3")
    if not g.is_connected():
        raise DisconnectedGraph("enumeration needs a connected graph")
    mask_list = sign_masks(g, masks) if isinstance(masks, str) else [int(x) for x in masks]
    options = rotation_options(g)
    tables = _kernel_tables(g, options)
    # faces = euler - n + m, and every face is traced twice
    target = 2 * (euler - g.n + g.m)
    name = backend or kernels.BACKEND
    if workers > 1 and len(mask_list) > 1:
        chunks = [mask_list[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_scan_chunk, [(name, tables, c, g.m, target) for c in chunks if c]))
        flats = np.concatenate([p[0] for p in parts])
        found = np.concatenate([p[1] for p in parts])
    else:
        flats, found = _scan_chunk((name, tables, mask_list, g.m, target))

    radices = [len(r) for r in options]
    canon = _Canonicalizer(g.n)
    all_keys: set[Key] = set()
    false_keys: set[Key] = set()
    idx = g.edge_index
    sign_cache: dict[int, dict[tuple[int, int], int]] = {}
    for flat, mask in zip(flats.tolist(), found.tolist()):
        choice = []
        for r in reversed(radices):
            choice.append(flat % r)
            flat //= r
        choice.reverse()
        pi = [options[v][k] for v, k in enumerate(choice)]
        sign = sign_cache.get(mask)
        if sign is None:
            sign = {}
            for (a, b), i in idx.items():
                s = -1 if (mask >> i) & 1 else 1
                sign[(a, b)] = s
                sign[(b, a)] = s
            sign_cache[mask] = sign
        key = canon(pi, sign)
        all_keys.add(key)
        if mask == 0:
            false_keys.add(key)
    total = len(mask_list) * math.prod(radices)
    log.info("scanned %d systems, %d with chi=%d, %d classes", total, len(flats), euler, canon.classes)
    return EnumerationResult(
        g,
        frozenset(system_from_key(k) for k in all_keys),
        frozenset(system_from_key(k) for k in false_keys),
        scanned=total,
        survivors=len(flats),
        stats={"backend": name, "masks": len(mask_list), "classes": canon.classes},
    )


def canonical_sorted(systems) -> list[RotationSystem]:
    return sorted(systems, key=RotationSystem.key)


def is_canonical(rs: RotationSystem) -> bool:
    return canonical_key(rs)[0] == rs.key() and format_system(rs)[0] == rs
