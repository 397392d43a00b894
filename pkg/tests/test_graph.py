import pytest

from kleindraw.errors import BadDimensions, DuplicateEdge, SelfLoop, UnknownName, VertexOutOfRange
from kleindraw.graph import (
    build_graph,
    complete_bipartite,
    cycle_graph,
    edge_key,
    is_k_connected,
    is_planar,
    klein_grid,
    make_named,
)


def test_build_graph_normalizes():
    g = build_graph(3, [(2, 0), (1, 0)])
    assert g.edges == ((0, 1), (0, 2))
    assert g.adj == ((1, 2), (0,), (0,))
    assert g.m == 2 and g.degrees() == [2, 1, 1]


@pytest.mark.parametrize(
    "edges, exc",
    [([(0, 0)], SelfLoop), ([(0, 1), (1, 0)], DuplicateEdge), ([(0, 5)], VertexOutOfRange)],
)
def test_build_graph_rejects(edges, exc):
    with pytest.raises(exc):
        build_graph(3, edges)


def test_named_graphs():
    k5 = make_named("K5")
    assert (k5.n, k5.m) == (5, 10)
    k33 = make_named("k3,3")
    assert k33.edges == complete_bipartite(3, 3).edges
    with pytest.raises(UnknownName):
        make_named("K7")


def test_planarity_and_connectivity():
    assert not is_planar(make_named("K5"))
    assert not is_planar(make_named("K33"))
    assert is_planar(cycle_graph(6))
    assert is_k_connected(make_named("K5"), 4)
    assert not is_k_connected(cycle_graph(6), 3)
    assert is_k_connected(cycle_graph(6), 2)


def test_connected_with_removed():
    g = cycle_graph(5)
    assert g.is_connected([0])
    assert not g.is_connected([0, 2])


def test_relabel_and_subgraph():
    g = cycle_graph(4)
    h = g.relabel([1, 2, 3, 0])
    assert h.edge_set == g.edge_set
    s = g.subgraph([(0, 1)])
    assert s.n == 4 and s.edges == ((0, 1),)
    assert s.vertices_with_edges() == [0, 1]


def test_klein_grid_shape():
    g, rs = klein_grid(2, 8)
    assert g.n == 16 and g.m == 32
    assert all(d == 4 for d in g.degrees())
    # only the wrap across the x sides is twisted
    twisted = [e for e in g.edges if rs.sign(*e) < 0]
    assert len(twisted) == 8
    assert edge_key(0, 8) in g.edge_set


@pytest.mark.parametrize("m, n", [(1, 5), (5, 1), (2, 2), (3, 2)])
def test_klein_grid_bad_dimensions(m, n):
    with pytest.raises(BadDimensions):
        klein_grid(m, n)


def test_klein_grid_examples():
    g, _ = klein_grid(2, 8)
    assert not is_planar(g)
    assert is_k_connected(g, 3)


def _genus_zero_exists(g) -> bool:
    """Brute-force oracle: some orientable rotation system of ``g`` has Euler characteristic 2."""
    from itertools import permutations, product

    from kleindraw.rotation import RotationSystem, euler_characteristic

    options = [[(a[0],) + p for p in permutations(a[1:])] if a else [()] for a in g.adj]
    return any(euler_characteristic(RotationSystem(g, list(pi))) == 2 for pi in product(*options))


def test_planarity_matches_genus_oracle():
    import math
    import random

    rng = random.Random(11)
    checked = 0
    while checked < 40:
        n = rng.randint(4, 7)
        edges = {edge_key(i, rng.randrange(i)) for i in range(1, n)}  # spanning tree keeps it connected
        edges |= {edge_key(*rng.sample(range(n), 2)) for _ in range(rng.randint(0, 2 * n))}
        g = build_graph(n, edges)
        if math.prod(math.factorial(max(d - 1, 0)) for d in g.degrees()) > 20_000:
            continue
        assert is_planar(g) == _genus_zero_exists(g), g.edges
        checked += 1
    assert not _genus_zero_exists(make_named("K33"))
