import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_system
from kleindraw.errors import DegreeTooLow, NotASubdivision, VertexOutOfRange
from kleindraw.graph import build_graph, complete_graph, cycle_graph, klein_grid, make_named
from kleindraw.rotation import (
    RotationSystem,
    apply_switches,
    balancing_switches,
    count_faces,
    equivalent,
    euler_characteristic,
    format_system,
    frustration,
    induced_smoothed,
    is_balanced,
    isomorphisms,
    planar_k4,
    relabel,
    restrict,
    switch,
    trace_faces,
    walk_corners,
)

GRAPHS = [make_named("K5"), make_named("K33")]


@st.composite
def systems(draw):
    g = draw(st.sampled_from(GRAPHS))
    return random_system(g, random.Random(draw(st.integers(0, 2**32))))


@st.composite
def system_and_perm(draw):
    rs = draw(systems())
    perm = draw(st.permutations(range(rs.n)))
    switched = draw(st.sets(st.integers(0, rs.n - 1)))
    return rs, tuple(perm), switched


def brute_faces(rs: RotationSystem) -> int:
    """Face count by direct orbit tracing, no kernels involved."""
    seen = set()
    orbits = 0
    for a, b in rs.graph.edges:
        for start in ((a, b, 1), (a, b, -1), (b, a, 1), (b, a, -1)):
            if start in seen:
                continue
            orbits += 1
            u, v, s = start
            while (u, v, s) not in seen:
                seen.add((u, v, s))
                s *= rs.sign(u, v)
                p = rs.pi[v]
                i = p.index(u)
                u, v = v, (p[(i + 1) % len(p)] if s > 0 else p[i - 1])
    return orbits // 2


def test_planar_k4_is_sphere():
    assert euler_characteristic(planar_k4()) == 2
    assert len(trace_faces(planar_k4())) == 4


def test_torus_and_klein_grids():
    _, rs = klein_grid(3, 4)
    assert euler_characteristic(rs) == 0
    assert not is_balanced(rs)


@given(systems())
@settings(max_examples=200, deadline=None)
def test_face_count_matches_brute_force(rs):
    assert count_faces(rs) == brute_faces(rs) == len(trace_faces(rs))


@given(systems())
@settings(max_examples=100, deadline=None)
def test_each_face_traced_twice(rs):
    fs = trace_faces(rs)
    assert len(fs.orbits) == 2 * len(fs.faces)
    assert sum(len(o) for o in fs.orbits) == 4 * rs.graph.m
    corners = [c for w in fs.faces for c in walk_corners(rs, w)]
    # every angular sector belongs to exactly one face
    assert len(corners) == len(set(corners)) == 2 * rs.graph.m


@given(system_and_perm())
@settings(max_examples=200, deadline=None)
def test_switch_and_relabel_preserve_euler(args):
    rs, perm, switched = args
    chi = euler_characteristic(rs)
    assert euler_characteristic(apply_switches(rs, switched)) == chi
    assert euler_characteristic(relabel(rs, perm)) == chi
    assert is_balanced(apply_switches(rs, switched)) == is_balanced(rs)


@given(system_and_perm())
@settings(max_examples=200, deadline=None)
def test_format_idempotent_and_switch_invariant(args):
    rs, _, switched = args
    f, _ = format_system(rs)
    assert format_system(f)[0] == f
    assert format_system(apply_switches(rs, switched))[0] == f


@given(system_and_perm())
@settings(max_examples=100, deadline=None)
def test_equivalent_recovers_witness(args):
    rs, perm, switched = args
    other = relabel(apply_switches(rs, switched), perm)
    wit = equivalent(rs, other, allow_relabel=True)
    assert wit is not None
    back = relabel(apply_switches(rs, wit.switched), wit.phi)
    assert back.rotated_equal(other)
    assert equivalent(rs, apply_switches(rs, switched)) is not None


def test_equivalent_rejects_different_signs():
    g = make_named("K5")
    a = RotationSystem(g, [list(g.adj[v]) for v in range(5)])
    b = RotationSystem(g, a.pi, [-1] + [1] * (g.m - 1))
    assert equivalent(a, b) is None


def test_switch_twice_is_identity():
    rs = random_system(make_named("K5"), random.Random(1))
    assert switch(switch(rs, 3), 3) == rs
    with pytest.raises(VertexOutOfRange):
        switch(rs, 9)


def test_format_needs_degree_three():
    g = cycle_graph(4)
    with pytest.raises(DegreeTooLow):
        format_system(RotationSystem(g, [list(a) for a in g.adj]))


def test_balancing_switches_make_all_positive():
    rs = random_system(make_named("K33"), random.Random(3))
    bal = apply_switches(RotationSystem(rs.graph, rs.pi), [0, 4])
    flags = balancing_switches(bal)
    assert flags is not None
    fixed = apply_switches(bal, [v for v in range(bal.n) if flags[v]])
    assert all(s == 1 for s in fixed.w)


def brute_frustration(rs):
    best = rs.graph.m
    for flags in itertools.product((1, -1), repeat=rs.n):
        best = min(best, sum(1 for s, (a, b) in zip(rs.w, rs.graph.edges) if s * flags[a] * flags[b] < 0))
    return best


@given(systems())
@settings(max_examples=50, deadline=None)
def test_frustration_matches_brute_force(rs):
    assert frustration(rs) == brute_frustration(rs)
    assert (frustration(rs) == 0) == is_balanced(rs)


def test_isomorphisms_of_k5_and_k33():
    assert sum(1 for _ in isomorphisms(complete_graph(5), complete_graph(5))) == 120
    k33 = make_named("K33")
    assert sum(1 for _ in isomorphisms(k33, k33)) == 72


def test_restrict_and_smooth():
    g = complete_graph(6)
    rs = random_system(g, random.Random(2))
    # subdivide the edge 0-1 of a K5 on 0..4 through vertex 5
    h = build_graph(6, [e for e in complete_graph(5).edges if e != (0, 1)] + [(0, 5), (1, 5)])
    r = restrict(rs, h)
    assert r.graph is h and all(len(p) == h.degree(v) for v, p in enumerate(r.pi))
    core, sub = induced_smoothed(rs, h)
    assert sub.kind == "K5" and sub.branch == (0, 1, 2, 3, 4)
    assert sub.chains[(0, 1)] == (0, 5, 1)
    assert core.sign(0, 1) == rs.sign(0, 5) * rs.sign(5, 1)
    with pytest.raises(NotASubdivision):
        induced_smoothed(rs, build_graph(6, [(0, 1), (1, 2), (0, 2)]))


def _k5_with(pi2):
    g = make_named("K5")
    pi = [list(a) for a in g.adj]
    pi[2] = pi2
    return RotationSystem(g, pi)


def test_switch_reverses_and_negates():
    rs = switch(_k5_with([0, 1, 4, 3]), 2)
    assert rs.pi[2] == (3, 4, 1, 0)
    assert all(rs.sign(2, u) == -1 for u in (0, 1, 3, 4))
    everything = apply_switches(rs, range(5))
    assert everything.w == rs.w
    assert all(a == b[::-1] for a, b in zip(everything.pi, rs.pi))


def test_format_flip_rule():
    g = complete_graph(4)
    rs = RotationSystem(g, [(1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2)])
    f, flags = format_system(rs)
    assert f.pi[0] == (1, 2, 3) and not flags[0]
    rs = RotationSystem(g, [(2, 1, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2)])
    f, flags = format_system(rs)
    assert f.pi[0] == (1, 2, 3) and flags[0]
    assert all(f.sign(0, u) == -1 for u in (1, 2, 3))


def test_equivalent_reflexive_and_single_switch():
    rs = random_system(make_named("K5"), random.Random(9))
    wit = equivalent(rs, rs)
    assert wit.phi == tuple(range(5)) and wit.switched == frozenset()
    assert equivalent(rs, switch(rs, 3)).switched == frozenset({3})


def test_frustration_at_most_half():
    rng = random.Random(12)
    for _ in range(100):
        assert frustration(random_system(make_named("K5"), rng)) <= 5


def test_smoothing_signs_and_identity():
    g = make_named("K5")
    rs = random_system(g, random.Random(5))
    core, sub = induced_smoothed(rs, g)
    assert core == rs and all(len(p) == 2 for p in sub.chains.values())
    host = complete_graph(6)
    signs = {e: 1 for e in host.edges}
    signs[(0, 5)] = -1
    h = build_graph(6, [e for e in complete_graph(5).edges if e != (0, 1)] + [(0, 5), (1, 5)])
    core, _ = induced_smoothed(RotationSystem(host, [list(a) for a in host.adj], signs), h)
    assert core.sign(0, 1) == -1


def test_balance_examples():
    g = make_named("K5")
    flat = RotationSystem(g, [list(a) for a in g.adj])
    assert is_balanced(flat)
    assert is_balanced(apply_switches(flat, [1, 3]))
    assert not is_balanced(RotationSystem(g, flat.pi, [-1] * g.m))
