import math

from hypothesis import given, settings
from hypothesis import strategies as st

from kleindraw.shifts import IDENTITY, KleinShift, apply_shift, fold, shift_compose, shift_inverse

ints = st.integers(-6, 6)
shifts = st.builds(KleinShift, ints, ints)
coords = st.floats(-5, 5, allow_nan=False)
points = st.tuples(coords, coords)


def close(p, q, tol=1e-9):
    return math.isclose(p[0], q[0], abs_tol=tol) and math.isclose(p[1], q[1], abs_tol=tol)


@given(shifts, shifts, shifts)
def test_group_axioms(s, t, u):
    assert s.compose(t).compose(u) == s.compose(t.compose(u))
    assert s.compose(IDENTITY) == IDENTITY.compose(s) == s
    assert s.compose(s.inverse()) == s.inverse().compose(s) == IDENTITY


@given(shifts, shifts, points)
def test_compose_matches_apply(s, t, p):
    assert close(s.compose(t).apply(p), s.apply(t.apply(p)))
    assert close(s.inverse().apply(s.apply(p)), p)


def test_defining_relation():
    a, b = KleinShift(1, 0), KleinShift(0, 1)
    assert a.compose(b).compose(a.inverse()) == KleinShift(0, -1)


def test_odd_shift_mirrors_y():
    assert KleinShift(1, 0).apply((0.25, 0.25)) == (1.25, 0.75)
    assert KleinShift(1, 0).flips and not KleinShift(2, 3).flips


def test_functional_aliases():
    s, t = KleinShift(1, 2), KleinShift(-1, 5)
    assert shift_compose(s, t) == s.compose(t)
    assert shift_inverse(s) == s.inverse()
    assert apply_shift(s, (0.5, 0.5)) == s.apply((0.5, 0.5))


@given(points)
@settings(max_examples=500)
def test_fold_lands_in_square(p):
    q, t = fold(p)
    assert 0.0 <= q[0] < 1.0 and 0.0 <= q[1] < 1.0
    assert close(t.apply(q), p)


@given(shifts, st.tuples(st.floats(0, 0.999), st.floats(0, 0.999)))
def test_fold_recovers_shift(s, q):
    q2, t = fold(s.apply(q))
    assert close(q2, q, 1e-9)
    assert t == s
