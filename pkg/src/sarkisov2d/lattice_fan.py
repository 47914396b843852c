"""Exact lattice geometry in N = Z^2: primitive vectors, complete fans,
smooth subdivision, ray removal, projections to P^1 and fan isomorphism.

Fans are stored counterclockwise with an explicit start ray. All arithmetic
is on Python ints, so nothing overflows.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from math import gcd
from typing import Iterable, NamedTuple, Optional, Sequence


class FanError(ValueError):
    """Invalid fan data or an inadmissible fan operation.

    ``code`` is a stable machine-readable tag (used in CLI error reports).
    """

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class Vec(NamedTuple):
    x: int
    y: int

    def __neg__(self) -> "Vec":
        return Vec(-self.x, -self.y)

    def __str__(self) -> str:
        return f"({self.x},{self.y})"


def det(v: Sequence[int], w: Sequence[int]) -> int:
    return v[0] * w[1] - v[1] * w[0]


def pair(u: Sequence, v: Sequence):
    """<u, v> for u in M and v in N."""
    return u[0] * v[0] + u[1] * v[1]


def make_primitive(v: Sequence[int]) -> Vec:
    x, y = int(v[0]), int(v[1])
    if x == 0 and y == 0:
        raise FanError("zero_vector", "zero vector has no direction")
    g = gcd(abs(x), abs(y))
    return Vec(x // g, y // g)


def is_primitive(v: Sequence[int]) -> bool:
    return (v[0], v[1]) != (0, 0) and gcd(abs(v[0]), abs(v[1])) == 1


def _ccw_from(start: Vec):
    """Comparator ordering vectors by counterclockwise angle from ``start``."""

    def half(w: Vec) -> int:
        d = det(start, w)
        if d > 0 or (d == 0 and pair(start, w) > 0):
            return 0
        return 1

    def cmp(a: Vec, b: Vec) -> int:
        ha, hb = half(a), half(b)
        if ha != hb:
            return ha - hb
        d = det(a, b)
        return -1 if d > 0 else (1 if d < 0 else 0)

    return cmp


@dataclass(frozen=True)
class Cone2:
    head: int
    tail: int
    multiplicity: int

    @property
    def smooth(self) -> bool:
        return self.multiplicity == 1


@dataclass(frozen=True)
class Fan:
    """A complete fan in Z^2, given by its rays in counterclockwise order.

    Construct through :func:`validate_fan` unless the rays are known to be
    primitive, distinct and correctly ordered.
    """

    rays: tuple[Vec, ...]

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(Vec(*r) for r in self.rays))
        n = len(self.rays)
        if n < 3:
            raise FanError("too_few_rays", f"a complete fan needs at least 3 rays, got {n}")
        for r in self.rays:
            if not is_primitive(r):
                raise FanError("not_primitive", f"ray {r} is not primitive")
        if len(set(self.rays)) != n:
            raise FanError("duplicate_ray", "duplicate ray directions")
        for i in range(n):
            if det(self.rays[i], self.rays[(i + 1) % n]) <= 0:
                raise FanError(
                    "not_complete",
                    f"rays {self.rays[i]} and {self.rays[(i + 1) % n]} do not span a strictly convex cone",
                )
        # winding number one: the ccw angles between neighbours add up to 2*pi
        start = self.rays[0]
        cmp = _ccw_from(start)
        for i in range(1, n - 1):
            if cmp(self.rays[i], self.rays[i + 1]) >= 0:
                raise FanError("not_complete", "rays wind more than once around the origin")

    @property
    def n(self) -> int:
        return len(self.rays)

    @property
    def cones(self) -> tuple[Cone2, ...]:
        n = self.n
        return tuple(
            Cone2(i, (i + 1) % n, det(self.rays[i], self.rays[(i + 1) % n])) for i in range(n)
        )

    @property
    def multiplicities(self) -> list[int]:
        return [c.multiplicity for c in self.cones]

    @property
    def is_smooth(self) -> bool:
        return all(m == 1 for m in self.multiplicities)

    def index(self, v: Sequence[int]) -> int:
        try:
            return self.rays.index(Vec(*v))
        except ValueError:
            raise FanError("unknown_ray", f"{tuple(v)} is not a ray of the fan") from None

    def neighbours(self, j: int) -> tuple[Vec, Vec]:
        return self.rays[(j - 1) % self.n], self.rays[(j + 1) % self.n]

    def cone_containing(self, v: Sequence[int]) -> int:
        """Index i of the cone <v_i, v_{i+1}> containing ``v`` (first one on a shared ray)."""
        for i in range(self.n):
            a, b = self.rays[i], self.rays[(i + 1) % self.n]
            if det(a, v) >= 0 and det(v, b) >= 0:
                return i
        raise AssertionError("complete fan must contain every vector")

    def rotated(self, start: int) -> "Fan":
        return Fan(self.rays[start:] + self.rays[:start])

    def __str__(self) -> str:
        return "[" + ", ".join(str(r) for r in self.rays) + "]"


def validate_fan(rays: Iterable[Sequence[int]]) -> Fan:
    raw = [tuple(r) for r in rays]
    if len(raw) < 3:
        raise FanError("too_few_rays", f"a complete fan needs at least 3 rays, got {len(raw)}")
    prim = [make_primitive(r) for r in raw]
    if len(set(prim)) != len(prim):
        raise FanError("duplicate_ray", "duplicate ray directions")
    start = prim[0]
    ordered = [start] + sorted(prim[1:], key=cmp_to_key(_ccw_from(start)))
    n = len(ordered)
    for i in range(n):
        if det(ordered[i], ordered[(i + 1) % n]) <= 0:
            raise FanError(
                "not_complete",
                f"rays {ordered[i]} and {ordered[(i + 1) % n]} leave a gap or a half-plane cone",
            )
    return Fan(tuple(ordered))


# -- subdivision -------------------------------------------------------------


def _split_point(a: Vec, b: Vec) -> Vec:
    """Primitive w = alpha*a + beta*b, alpha, beta > 0, alpha + beta <= 1,
    minimising alpha + beta, ties broken by lexicographic (x, y)."""
    m = det(a, b)
    best = None
    xs = [0, a.x, b.x]
    ys = [0, a.y, b.y]
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            w = (x, y)
            # alpha = det(w, b)/m, beta = det(a, w)/m
            ia, ib = det(w, b), det(a, w)
            if ia <= 0 or ib <= 0 or ia + ib > m or not is_primitive(w):
                continue
            key = (ia + ib, x, y)
            if best is None or key < best:
                best = key
    assert best is not None, "a cone of multiplicity > 1 always has an interior lattice point"
    return Vec(best[1], best[2])


@lru_cache(maxsize=512)
def subdivide_to_smooth(fan: Fan) -> tuple[Fan, tuple[int, ...]]:
    """Smooth refinement of ``fan``; returns the new fan and the indices (in
    the new fan) of the inserted rays, in insertion order."""
    rays = list(fan.rays)
    inserted: list[Vec] = []
    i = 0
    while i < len(rays):
        a, b = rays[i], rays[(i + 1) % len(rays)]
        if det(a, b) > 1:
            w = _split_point(a, b)
            rays.insert(i + 1, w)
            inserted.append(w)
            continue
        i += 1
    smooth = Fan(tuple(rays))
    return smooth, tuple(smooth.index(w) for w in inserted)


# -- morphisms ---------------------------------------------------------------


@dataclass(frozen=True)
class P1Fan:
    """The complete fan of P^1 in Z: rays +1 and -1."""

    rays: tuple[int, int] = (1, -1)

    def __str__(self) -> str:
        return "P1"


@dataclass(frozen=True)
class FanMap:
    """One elementary toric morphism.

    kind is ``"ray-removal"`` (birational, ``removed`` set), ``"lattice-projection"``
    (onto P^1 along the linear form ``form``) or ``"collapse-to-point"``.
    """

    kind: str
    source: Fan
    target: Optional[object]
    removed: Optional[Vec] = None
    form: Optional[tuple[int, int]] = None
    positive: tuple[Vec, ...] = field(default=())
    negative: tuple[Vec, ...] = field(default=())
    kernel: tuple[Vec, ...] = field(default=())

    @property
    def relative_picard(self) -> int:
        src = self.source.n - 2
        if self.kind == "ray-removal":
            return 1
        if self.kind == "lattice-projection":
            return src - 1
        return src


def remove_ray(fan: Fan, j: int) -> FanMap:
    if fan.n <= 3:
        raise FanError("not_contractible", "ray not contractible: at least 3 rays must remain")
    prev, nxt = fan.neighbours(j)
    if det(prev, nxt) <= 0:
        raise FanError("not_contractible", f"ray not contractible: {fan.rays[j]}")
    target = Fan(fan.rays[:j] + fan.rays[j + 1:]) if j else Fan(fan.rays[1:])
    return FanMap("ray-removal", fan, target, removed=fan.rays[j])


def remove_rays(fan: Fan, rays: Iterable[Sequence[int]]) -> list[FanMap]:
    """Remove a set of rays one at a time in the fan's cyclic order.

    Any admissible order reaches the same target; this one is canonical.
    """
    todo = {Vec(*r) for r in rays}
    steps = []
    current = fan
    for r in fan.rays:
        if r in todo:
            step = remove_ray(current, current.index(r))
            steps.append(step)
            current = step.target
    return steps


def normalize_form(form: Sequence[int]) -> tuple[int, int]:
    """Primitive linear form with first nonzero entry positive."""
    a, b = make_primitive(form)
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return (a, b)


def fibration_ok(fan: Fan, form: Sequence[int]) -> bool:
    """Every 2D cone maps into a single closed half-line and both signs occur."""
    vals = [pair(form, r) for r in fan.rays]
    for i in range(fan.n):
        a, b = vals[i], vals[(i + 1) % fan.n]
        if a * b < 0:
            return False
    return any(v > 0 for v in vals) and any(v < 0 for v in vals)


def project_fan(fan: Fan, form: Sequence[int]) -> FanMap:
    form = tuple(int(c) for c in form)
    if form == (0, 0) or gcd(abs(form[0]), abs(form[1])) != 1:
        raise FanError("bad_form", f"linear form {form} must be primitive and nonzero")
    if not fibration_ok(fan, form):
        raise FanError("not_fibration", "not a fibration over P1")
    pos = tuple(r for r in fan.rays if pair(form, r) > 0)
    neg = tuple(r for r in fan.rays if pair(form, r) < 0)
    ker = tuple(r for r in fan.rays if pair(form, r) == 0)
    return FanMap("lattice-projection", fan, P1Fan(), form=form, positive=pos, negative=neg, kernel=ker)


def collapse(fan: Fan) -> FanMap:
    return FanMap("collapse-to-point", fan, None)


def fibrations(fan: Fan) -> list[tuple[int, int]]:
    """All projections to P^1 compatible with ``fan``, in scan order of their
    first kernel ray."""
    out = []
    for r in fan.rays:
        if -r in fan.rays:
            form = normalize_form((-r.y, r.x))
            if form not in out and fibration_ok(fan, form):
                out.append(form)
    return out


# -- isomorphism -------------------------------------------------------------

Matrix2 = tuple[tuple[int, int], tuple[int, int]]


def _solve_map(v0: Vec, v1: Vec, w0: Vec, w1: Vec) -> Optional[Matrix2]:
    """Integer M with M v0 = w0, M v1 = w1, or None."""
    d = det(v0, v1)
    # M = W V^{-1},  V^{-1} = [[v1.y, -v1.x], [-v0.y, v0.x]] / d
    entries = []
    for row in ((w0.x, w1.x), (w0.y, w1.y)):
        a = Fraction(row[0] * v1.y - row[1] * v0.y, d)
        b = Fraction(-row[0] * v1.x + row[1] * v0.x, d)
        if a.denominator != 1 or b.denominator != 1:
            return None
        entries.append((int(a), int(b)))
    return (entries[0], entries[1])


def apply(m: Matrix2, v: Sequence[int]) -> Vec:
    return Vec(m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def fan_isomorphic(f1: Fan, f2: Fan) -> Optional[Matrix2]:
    """A unimodular matrix carrying the rays of ``f1`` onto those of ``f2``,
    or None. The identity is preferred when it works."""
    if f1.n != f2.n:
        return None
    if set(f1.rays) == set(f2.rays):
        return ((1, 0), (0, 1))
    n = f1.n
    v0, v1 = f1.rays[0], f1.rays[1]
    target = set(f2.rays)
    for step in (1, -1):
        for r in range(n):
            w0, w1 = f2.rays[r], f2.rays[(r + step) % n]
            m = _solve_map(v0, v1, w0, w1)
            if m is None or abs(m[0][0] * m[1][1] - m[0][1] * m[1][0]) != 1:
                continue
            if {apply(m, v) for v in f1.rays} == target:
                return m
    return None


def kernel_weights(fan: Fan) -> tuple[int, ...]:
    """Sorted positive weights (a, b, c) with a v1 + b v2 + c v3 = 0 for a
    three-ray fan (the weighted projective plane it presents)."""
    if fan.n != 3:
        raise FanError("not_weighted_plane", "only three-ray fans are weighted projective planes")
    v1, v2, v3 = fan.rays
    w = [det(v2, v3), det(v3, v1), det(v1, v2)]
    g = gcd(gcd(w[0], w[1]), w[2])
    return tuple(sorted(abs(x) // g for x in w))


# -- text format -------------------------------------------------------------


def parse_fan(text: str) -> Fan:
    rays = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "ray" or len(parts) != 3:
            raise FanError("parse_error", f"line {lineno}: expected 'ray <x> <y>', got {line!r}")
        try:
            rays.append((int(parts[1]), int(parts[2])))
        except ValueError:
            raise FanError("parse_error", f"line {lineno}: non-integer coordinate") from None
    # file order is the cyclic order; validate_fan only re-sorts if needed
    return validate_fan(rays)


def format_fan(fan: Fan, comment: str = "") -> str:
    lines = [f"# {comment}"] if comment else []
    lines += [f"ray {r.x} {r.y}" for r in fan.rays]
    return "\n".join(lines) + "\n"
