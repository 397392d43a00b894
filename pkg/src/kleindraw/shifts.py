"""Deck transformations of the flat Klein bottle.

The x direction is the inverted one: an odd horizontal shift mirrors y.
``KleinShift(a, b)`` acts on the unfolded plane by

    (x, y) -> (a + x, b + y)        a even
    (x, y) -> (a + x, b + 1 - y)    a odd
"""

from __future__ import annotations

import math
from typing import NamedTuple

Point = tuple[float, float]


class KleinShift(NamedTuple):
    a: int = 0
    b: int = 0

    @property
    def flips(self) -> bool:
        """True when the transformation reverses orientation."""
        return self.a % 2 == 1

    def apply(self, p: Point) -> Point:
        x, y = p
        if self.a % 2:
            return (self.a + x, self.b + 1.0 - y)
        return (self.a + x, self.b + y)

    def compose(self, other: KleinShift) -> KleinShift:
        """``self`` after ``other``."""
        if self.a % 2:
            return KleinShift(self.a + other.a, self.b - other.b)
        return KleinShift(self.a + other.a, self.b + other.b)

    def inverse(self) -> KleinShift:
        if self.a % 2:
            return KleinShift(-self.a, self.b)
        return KleinShift(-self.a, -self.b)

    def __repr__(self) -> str:
        return f"KleinShift({self.a}, {self.b})"


IDENTITY = KleinShift(0, 0)


def apply_shift(s: KleinShift, p: Point) -> Point:
    return s.apply(p)


def shift_compose(s: KleinShift, t: KleinShift) -> KleinShift:
    return s.compose(t)


def shift_inverse(s: KleinShift) -> KleinShift:
    return s.inverse()


def fold(p: Point) -> tuple[Point, KleinShift]:
    """Split an unfolded point into ``(q, T)`` with ``q`` in ``[0,1)^2`` and ``T.apply(q) == p``."""
    x, y = p
    a = math.floor(x)
    fx = x - a
    if fx >= 1.0:  # x just below an integer rounds up
        fx, a = 0.0, a + 1
    if a % 2:
        # y = b + 1 - fy with fy in [0, 1)
        b = math.ceil(y) - 1
        fy = b + 1 - y
    else:
        b = math.floor(y)
        fy = y - b
    if fy >= 1.0:
        fy = 0.0
        b = b - 1 if a % 2 else b + 1
    if fy < 0.0:
        fy = 0.0
    return (fx, fy), KleinShift(int(a), int(b))
