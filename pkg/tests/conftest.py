from __future__ import annotations

import random

import pytest

from kleindraw.enumeration import enumerate_embeddings
from kleindraw.graph import make_named
from kleindraw.omega import load_omega
from kleindraw.rotation import RotationSystem


@pytest.fixture(scope="session")
def omega():
    return load_omega()


@pytest.fixture(scope="session")
def k5_result():
    return enumerate_embeddings(make_named("K5"))


@pytest.fixture(scope="session")
def k33_result():
    return enumerate_embeddings(make_named("K33"))


def random_system(g, rng: random.Random) -> RotationSystem:
    """Uniformly random rotation and signs on ``g``."""
    pi = []
    for v in range(g.n):
        p = list(g.adj[v])
        rng.shuffle(p)
        pi.append(p)
    return RotationSystem(g, pi, [rng.choice((1, -1)) for _ in g.edges])


def chain_deviation(d, path) -> float:
    """Largest distance of an unfolded chain vertex from the segment joining the chain's ends."""
    from kleindraw.shifts import IDENTITY

    t = IDENTITY
    pts = [d.gamma[path[0]]]
    for a, b in zip(path, path[1:]):
        t = t.compose(d.shift(a, b))
        pts.append(t.apply(d.gamma[b]))
    (x0, y0), (x1, y1) = pts[0], pts[-1]
    length = ((x1 - x0) ** 2 + (y1 - y0) ** 2) ** 0.5
    return max(abs((x1 - x0) * (y - y0) - (y1 - y0) * (x - x0)) / length for x, y in pts)


# -- acceptance summary: one pass/fail line per criterion ---------------------

_criteria: dict[int, tuple[str, bool]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    num, title = mark.args
    ok = rep.passed and _criteria.get(num, (title, True))[1]
    if rep.when == "call" or not rep.passed:
        _criteria[num] = (title, ok)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        title, ok = _criteria[num]
        terminalreporter.write_line(f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title}")
