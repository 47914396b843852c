"""Exact convex polygons in the plane, from closed half-planes.

Everything is Fraction-valued. Polygons are found by enumerating the
vertices of the line arrangement, so inputs must describe a bounded set
(callers always include a bounding box).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable, Optional, Sequence

Point = tuple[Fraction, Fraction]


def pt(x, y) -> Point:
    return (Fraction(x), Fraction(y))


def cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class HalfPlane:
    """a*s + b*t <= c"""

    a: Fraction
    b: Fraction
    c: Fraction
    tag: object = None

    def value(self, p: Sequence) -> Fraction:
        return self.a * p[0] + self.b * p[1]

    def slack(self, p: Sequence) -> Fraction:
        return self.c - self.value(p)

    def contains(self, p: Sequence) -> bool:
        return self.value(p) <= self.c

    def is_trivial(self) -> bool:
        return self.a == 0 and self.b == 0

    def integer_triple(self) -> tuple[int, int, int]:
        """(a, b, c) scaled to coprime integers, same inequality."""
        den = lcm(self.a.denominator, self.b.denominator, self.c.denominator)
        vals = [int(x * den) for x in (self.a, self.b, self.c)]
        from math import gcd

        g = 0
        for v in vals:
            g = gcd(g, v)
        g = g or 1
        return tuple(v // g for v in vals)

    def same_line(self, other: "HalfPlane") -> bool:
        return self.integer_triple() == other.integer_triple() or self.integer_triple() == tuple(
            -v for v in other.integer_triple()
        )


def _meet(h1: HalfPlane, h2: HalfPlane) -> Optional[Point]:
    d = h1.a * h2.b - h1.b * h2.a
    if d == 0:
        return None
    return ((h1.c * h2.b - h1.b * h2.c) / d, (h1.a * h2.c - h1.c * h2.a) / d)


def convex_hull(points: Iterable[Point]) -> list[Point]:
    """Counterclockwise hull without collinear points (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


@dataclass(frozen=True)
class Polygon:
    halfplanes: tuple[HalfPlane, ...]
    vertices: tuple[Point, ...]

    @property
    def dim(self) -> int:
        return min(len(self.vertices), 3) - 1

    @property
    def empty(self) -> bool:
        return not self.vertices

    def contains(self, p: Sequence) -> bool:
        return all(h.contains(p) for h in self.halfplanes)

    def in_relative_interior(self, p: Sequence) -> bool:
        if not self.contains(p):
            return False
        if self.dim == 2:
            return all(h.is_trivial() or h.value(p) < h.c for h in self.halfplanes)
        if self.dim == 1:
            a, b = self.vertices
            return tuple(p) != a and tuple(p) != b
        return self.dim == 0 and tuple(p) == self.vertices[0]

    def tight(self, p: Sequence) -> frozenset:
        return frozenset(i for i, h in enumerate(self.halfplanes) if not h.is_trivial() and h.value(p) == h.c)

    @property
    def centroid(self) -> Point:
        k = len(self.vertices)
        return (sum(v[0] for v in self.vertices) / k, sum(v[1] for v in self.vertices) / k)

    @property
    def area(self) -> Fraction:
        if self.dim < 2:
            return Fraction(0)
        v = self.vertices
        s = sum(v[i][0] * v[(i + 1) % len(v)][1] - v[(i + 1) % len(v)][0] * v[i][1] for i in range(len(v)))
        return abs(s) / 2

    def edges(self) -> list[tuple[Point, Point]]:
        if self.dim < 2:
            return []
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def faces(self) -> list["Polygon"]:
        """All nonempty faces, highest dimension first."""
        if self.dim < 2:
            out = [self]
            if self.dim == 1:
                out += [from_points([v]) for v in self.vertices]
            return out
        return [self] + [from_points(e) for e in self.edges()] + [from_points([v]) for v in self.vertices]

    def intersect(self, other: "Polygon") -> "Polygon":
        return polygon(self.halfplanes + other.halfplanes)


def polygon(halfplanes: Iterable[HalfPlane]) -> Polygon:
    hs = tuple(halfplanes)
    for h in hs:
        if h.is_trivial() and h.c < 0:
            return Polygon(hs, ())
    real = [h for h in hs if not h.is_trivial()]
    cands = set()
    for h1, h2 in combinations(real, 2):
        p = _meet(h1, h2)
        if p is not None and all(h.contains(p) for h in real):
            cands.add(p)
    return Polygon(hs, tuple(convex_hull(cands)))


def segment_halfplanes(p: Point, r: Point) -> list[HalfPlane]:
    a, b = r[1] - p[1], p[0] - r[0]
    c = a * p[0] + b * p[1]
    da, db = r[0] - p[0], r[1] - p[1]
    return [
        HalfPlane(a, b, c),
        HalfPlane(-a, -b, -c),
        HalfPlane(da, db, da * r[0] + db * r[1]),
        HalfPlane(-da, -db, -(da * p[0] + db * p[1])),
    ]


def from_points(points: Iterable[Point]) -> Polygon:
    """H- and V-representation of the convex hull of ``points``."""
    hull = convex_hull(points)
    if not hull:
        return Polygon((), ())
    if len(hull) == 1:
        x, y = hull[0]
        hs = [
            HalfPlane(Fraction(1), Fraction(0), x),
            HalfPlane(Fraction(-1), Fraction(0), -x),
            HalfPlane(Fraction(0), Fraction(1), y),
            HalfPlane(Fraction(0), Fraction(-1), -y),
        ]
        return Polygon(tuple(hs), tuple(hull))
    if len(hull) == 2:
        return Polygon(tuple(segment_halfplanes(hull[0], hull[1])), tuple(hull))
    hs = []
    for i in range(len(hull)):
        p, r = hull[i], hull[(i + 1) % len(hull)]
        # interior on the left of p -> r
        a, b = r[1] - p[1], p[0] - r[0]
        hs.append(HalfPlane(a, b, a * p[0] + b * p[1]))
    return Polygon(tuple(hs), tuple(hull))


def box(s0, s1, t0, t1, tag="box") -> list[HalfPlane]:
    one, zero = Fraction(1), Fraction(0)
    return [
        HalfPlane(-one, zero, -Fraction(s0), tag),
        HalfPlane(one, zero, Fraction(s1), tag),
        HalfPlane(zero, -one, -Fraction(t0), tag),
        HalfPlane(zero, one, Fraction(t1), tag),
    ]


def on_segment(p: Point, a: Point, b: Point) -> bool:
    if cross(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def midpoint(a: Point, b: Point) -> Point:
    return ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
