"""Acceptance suite: one criterion per test group, summarized at the end of the run."""

import random
import time

import pytest

from conftest import chain_deviation, random_system
from growth import grown_system
from kleindraw.drawing import crossings, extract_rotation_system, klein_grid_drawing
from kleindraw.enumeration import canonical_form, enumerate_embeddings, labelled_upper_bound
from kleindraw.errors import GraphIsPlanar, NotKleinSystem, NotThreeConnected
from kleindraw.formats import parse_kdr, parse_krs_document, write_kdr, write_krs
from kleindraw.graph import build_graph, complete_graph, klein_grid, make_named
from kleindraw.omega import regenerate
from kleindraw.pipeline import TUTTE_EPS, TUTTE_MAX_ITER, draw, draw_report
from kleindraw.rotation import (
    RotationSystem,
    apply_switches,
    equivalent,
    euler_characteristic,
    format_system,
    frustration,
    is_balanced,
    planar_k4,
    relabel,
)
from kleindraw.shifts import IDENTITY, KleinShift

K5, K33 = make_named("K5"), make_named("K33")


def criterion(num, title):
    return pytest.mark.criterion(num, title)


@criterion(1, "enumeration counts 11 / 2 / 6")
def test_enumeration_counts(k5_result, k33_result):
    t0 = time.perf_counter()
    enumerate_embeddings(K33)
    assert time.perf_counter() - t0 < 5
    assert len(k5_result.klein) == 11
    assert len(k33_result.klein) == 2
    assert len(k5_result.false_positives) == 6


@criterion(2, "frustration 4 for both K5 signatures")
def test_frustration():
    rot = [list(a) for a in K5.adj]
    clique = {e: (-1 if 4 not in e else 1) for e in K5.edges}
    assert frustration(RotationSystem(K5, rot, clique)) == 4
    assert frustration(RotationSystem(K5, rot, [-1] * K5.m)) == 4


@criterion(3, "labelled upper bounds")
def test_upper_bounds():
    assert labelled_upper_bound(K5) == 7_962_624
    assert labelled_upper_bound(K33) == 32_768


@criterion(4, "normal form over 1000 random triples")
def test_normal_form_properties():
    rng = random.Random(2024)
    failures = 0
    for _ in range(1000):
        g = rng.choice([K5, K33])
        rs = random_system(g, rng)
        switched = rng.sample(range(g.n), rng.randrange(g.n + 1))
        perm = list(range(g.n))
        rng.shuffle(perm)
        f, _ = format_system(rs)
        other = apply_switches(rs, switched)
        ok = format_system(f)[0] == f and format_system(other)[0] == f
        ok = ok and canonical_form(relabel(other, perm)) == canonical_form(rs)
        failures += not ok
    assert failures == 0


@criterion(5, "K3,3 filter: all minus false positives equals the unbalanced systems")
def test_filter_equivalence(k33_result):
    res = k33_result
    assert res.all - res.false_positives == {s for s in res.all if not is_balanced(s)}


@criterion(6, "shift algebra over 10,000 random triples")
def test_shift_algebra():
    a, b = KleinShift(1, 0), KleinShift(0, 1)
    assert a.compose(b).compose(a.inverse()) == KleinShift(0, -1)
    rng = random.Random(7)
    failures = 0
    for _ in range(10_000):
        s, t, u = (KleinShift(rng.randint(-9, 9), rng.randint(-9, 9)) for _ in range(3))
        p = (rng.random(), rng.random())
        ok = s.compose(t).compose(u) == s.compose(t.compose(u))
        ok = ok and s.compose(IDENTITY) == s == IDENTITY.compose(s)
        ok = ok and s.compose(s.inverse()) == IDENTITY == s.inverse().compose(s)
        lhs, rhs = s.compose(t).apply(p), s.apply(t.apply(p))
        ok = ok and abs(lhs[0] - rhs[0]) < 1e-9 and abs(lhs[1] - rhs[1]) < 1e-9
        failures += not ok
    assert failures == 0


@criterion(7, "Euler characteristics")
def test_euler(omega):
    assert euler_characteristic(planar_k4()) == 2
    assert all(euler_characteristic(r.system) == 0 for r in omega)
    _, rs = klein_grid(2, 8)
    assert euler_characteristic(rs) == 0 and not is_balanced(rs)


def _cases():
    out = [pytest.param("omega", i, id=f"omega-{i}") for i in range(13)]
    out += [pytest.param("grid", (2, 8), id="grid-2x8"), pytest.param("grid", (2, 10), id="grid-2x10")]
    return out


@criterion(8, "end-to-end drawing of the base systems and Klein grids")
@pytest.mark.parametrize("kind, arg", _cases())
def test_end_to_end(omega, kind, arg):
    if kind == "omega":
        rs = omega[arg].system
    else:
        _, rs = klein_grid(*arg)
    t0 = time.perf_counter()
    rep = draw_report(rs.graph, rs, omega, eps=TUTTE_EPS, max_iter=TUTTE_MAX_ITER)
    elapsed = time.perf_counter() - t0
    d = rep.drawing
    assert crossings(d, 1e-9) == []
    assert equivalent(extract_rotation_system(d), rs) is not None
    assert max(chain_deviation(d, p) for p in rep.sub.chains.values()) <= 1e-9
    assert rep.sweeps <= TUTTE_MAX_ITER
    assert elapsed < 5


@criterion(9, "negative paths raise the documented errors")
def test_negative_paths(k5_result, omega):
    torus = next(iter(k5_result.false_positives))
    assert euler_characteristic(torus) == 0 and is_balanced(torus)
    with pytest.raises(NotKleinSystem):
        draw(K5, torus, omega)
    k4 = planar_k4()
    with pytest.raises(GraphIsPlanar):
        draw(k4.graph, k4, omega)
    # two K5s sharing the edge 0-1: non-planar with a 2-vertex cut
    edges = set(complete_graph(5).edges) | {(a, b) for a in (0, 1, 5, 6, 7) for b in (0, 1, 5, 6, 7) if a < b}
    g = build_graph(8, edges)
    with pytest.raises(NotThreeConnected):
        draw(g, RotationSystem(g, [list(a) for a in g.adj]), omega)


@criterion(10, "file round-trips and deterministic database regeneration")
def test_round_trips(omega):
    systems = [(r.system, r.kind) for r in omega]
    drawings = [r.drawing for r in omega]
    for m, n in [(2, 8), (2, 10), (3, 4)]:
        _, rs = klein_grid(m, n)
        systems.append((rs, f"grid{m}x{n}"))
        drawings.append(klein_grid_drawing(m, n))
    rng = random.Random(3)
    for _ in range(10):
        d, rs = grown_system(rng.choice(omega).drawing.copy(), rng, 12)
        systems.append((rs, "grown"))
        drawings.append(d)
    for rs, name in systems:
        text = write_krs(rs, name)
        doc = parse_krs_document(text)
        assert doc.system == rs and doc.name == name and write_krs(doc.system, doc.name) == text
    for d in drawings:
        text = write_kdr(d)
        back = parse_kdr(text)
        assert back.gamma == d.gamma and back.delta == d.delta and write_kdr(back) == text
    assert regenerate() == regenerate()
