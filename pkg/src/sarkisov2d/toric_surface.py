"""Torus-invariant divisors on the toric surface of a complete fan.

Intersection numbers always go through the smooth subdivision: a divisor is
pulled back along its piecewise-linear support function and evaluated with
the smooth-surface rules (neighbouring curves meet once, C_j^2 = -b_j where
v_{j-1} + v_{j+1} = b_j v_j).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Optional, Sequence, Union

from . import polygon as pg
from .lattice_fan import (
    Fan,
    FanError,
    FanMap,
    P1Fan,
    Vec,
    collapse,
    det,
    fibration_ok,
    normalize_form,
    pair,
    project_fan,
    remove_rays,
    subdivide_to_smooth,
)
from .rational import Number, fmt, q

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class TDivisor:
    """sum_i coeffs[i] * D_i, indexed by the rays of the ambient fan."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(q(c) for c in self.coeffs))

    @classmethod
    def of(cls, values: Iterable[Number]) -> "TDivisor":
        return cls(tuple(q(v) for v in values))

    @classmethod
    def zero(cls, n: int) -> "TDivisor":
        return cls((ZERO,) * n)

    @classmethod
    def prime(cls, n: int, j: int, c: Number = 1) -> "TDivisor":
        return cls(tuple(q(c) if i == j else ZERO for i in range(n)))

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def __add__(self, other: "TDivisor") -> "TDivisor":
        if len(other) != len(self):
            raise ValueError("divisors live on different fans")
        return TDivisor(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "TDivisor") -> "TDivisor":
        return self + (-other)

    def __neg__(self) -> "TDivisor":
        return TDivisor(tuple(-a for a in self.coeffs))

    def __mul__(self, c: Number) -> "TDivisor":
        c = q(c)
        return TDivisor(tuple(c * a for a in self.coeffs))

    __rmul__ = __mul__

    def drop(self, indices: Iterable[int]) -> "TDivisor":
        skip = set(indices)
        return TDivisor(tuple(a for i, a in enumerate(self.coeffs) if i not in skip))

    def to_json(self) -> list[str]:
        return [fmt(a) for a in self.coeffs]


@dataclass(frozen=True)
class ToricSurface:
    fan: Fan

    @property
    def n(self) -> int:
        return self.fan.n

    @property
    def picard_rank(self) -> int:
        return self.fan.n - 2

    @property
    def is_q_factorial(self) -> bool:
        # every 2D cone is simplicial
        return True

    def divisor(self, values: Iterable[Number]) -> TDivisor:
        d = TDivisor.of(values)
        if len(d) != self.n:
            raise ValueError(f"expected {self.n} coefficients, got {len(d)}")
        return d

    def prime(self, j: int) -> TDivisor:
        return TDivisor.prime(self.n, j)


Surface = ToricSurface


def canonical_divisor(X: ToricSurface) -> TDivisor:
    return TDivisor((Fraction(-1),) * X.n)


def principal(X: ToricSurface, u: Sequence[Number]) -> TDivisor:
    """div(chi^u) = sum <u, v_i> D_i."""
    return TDivisor(tuple(pair((q(u[0]), q(u[1])), r) for r in X.fan.rays))


# -- pullback / pushforward --------------------------------------------------


def support_value(fan: Fan, coeffs: Sequence[Fraction], w: Sequence[int]) -> Fraction:
    """Coefficient at a ray w of the pullback of sum coeffs[i] D_i to any
    refinement containing w; equals -psi_D(w) for the support function psi_D."""
    i = fan.cone_containing(w)
    a, b = fan.rays[i], fan.rays[(i + 1) % fan.n]
    m = det(a, b)
    alpha = Fraction(det(w, b), m)
    beta = Fraction(det(a, w), m)
    return alpha * coeffs[i] + beta * coeffs[(i + 1) % fan.n]


def pullback(D: TDivisor, coarse: Fan, fine: Fan) -> TDivisor:
    """Pull a divisor back along the birational morphism fine -> coarse."""
    return TDivisor(tuple(support_value(coarse, D.coeffs, w) for w in fine.rays))


def pushforward(D: TDivisor, source: Fan, target: Fan) -> TDivisor:
    """Drop the coefficients of rays contracted by source -> target."""
    idx = {r: i for i, r in enumerate(source.rays)}
    return TDivisor(tuple(D.coeffs[idx[r]] for r in target.rays))


def exceptional_part(D: TDivisor, source: Fan, target: Fan) -> dict[Vec, Fraction]:
    """Coefficients of D - f^* f_* D on the rays contracted by f: source -> target."""
    pushed = pushforward(D, source, target)
    out = {}
    for i, r in enumerate(source.rays):
        if r not in target.rays:
            out[r] = D.coeffs[i] - support_value(target, pushed.coeffs, r)
    return out


# -- intersections ------------------------------------------------------------


@lru_cache(maxsize=512)
def _smooth_data(fan: Fan) -> tuple[Fan, tuple[int, ...], tuple[int, ...]]:
    """Smooth refinement, position of each original ray in it, and the
    self-intersection numbers -b_j of the refinement."""
    smooth, _ = subdivide_to_smooth(fan)
    pos = tuple(smooth.index(r) for r in fan.rays)
    selfint = []
    for j in range(smooth.n):
        prev, nxt = smooth.neighbours(j)
        v = smooth.rays[j]
        s = Vec(prev.x + nxt.x, prev.y + nxt.y)
        # s = b * v exactly on a smooth fan
        b = s.x // v.x if v.x else s.y // v.y
        assert Vec(b * v.x, b * v.y) == s
        selfint.append(-b)
    return smooth, pos, tuple(selfint)


def _degree_row(fan: Fan, coeffs: Sequence[Fraction]) -> list[Fraction]:
    """(D . C_j)_j computed on the smooth refinement, with one pullback."""
    smooth, pos, selfint = _smooth_data(fan)
    pulled = [support_value(fan, coeffs, w) for w in smooth.rays]
    m = smooth.n
    return [pulled[(k - 1) % m] + pulled[(k + 1) % m] + selfint[k] * pulled[k] for k in pos]


def intersect(X: ToricSurface, D: TDivisor, j: int) -> Fraction:
    """D . C_j, where C_j is the torus-invariant curve of ray j."""
    return _degree_row(X.fan, D.coeffs)[j]


def degrees(X: ToricSurface, D: TDivisor) -> list[Fraction]:
    """(D . C_j)_j, via the cached intersection matrix."""
    Q = _intersection_matrix(X.fan)
    n = X.n
    return [sum((D.coeffs[i] * Q[i][j] for i in range(n) if D.coeffs[i]), ZERO) for j in range(n)]


@lru_cache(maxsize=512)
def _intersection_matrix(fan: Fan) -> tuple[tuple[Fraction, ...], ...]:
    n = fan.n
    return tuple(tuple(_degree_row(fan, [ONE if k == i else ZERO for k in range(n)])) for i in range(n))


def intersection_matrix(X: ToricSurface) -> list[list[Fraction]]:
    """Q[i][j] = D_i . C_j (symmetric)."""
    return [list(row) for row in _intersection_matrix(X.fan)]


def self_intersection(X: ToricSurface, j: int) -> Fraction:
    return _intersection_matrix(X.fan)[j][j]


def numerical_class(X: ToricSurface, D: TDivisor) -> tuple[Fraction, ...]:
    """Coordinates on D_0 .. D_{n-3} after using div(chi^u) to clear the
    coefficients of the last two rays."""
    n = X.n
    a, b = X.fan.rays[n - 2], X.fan.rays[n - 1]
    # solve <u, a> = -D[n-2], <u, b> = -D[n-1]
    d = det(a, b)
    ra, rb = -D.coeffs[n - 2], -D.coeffs[n - 1]
    u = ((ra * b.y - rb * a.y) / d, (rb * a.x - ra * b.x) / d)
    shifted = D + principal(X, u)
    assert shifted.coeffs[n - 2] == 0 and shifted.coeffs[n - 1] == 0
    return shifted.coeffs[: n - 2]


@dataclass(frozen=True)
class NefResult:
    ok: bool
    violations: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def is_nef(X: ToricSurface, D: TDivisor) -> NefResult:
    bad = tuple(j for j, d in enumerate(degrees(X, D)) if d < 0)
    return NefResult(not bad, bad)


def is_ample(X: ToricSurface, D: TDivisor) -> bool:
    # toric Nakai criterion; the fan is complete by construction
    return all(d > 0 for d in degrees(X, D))


def is_numerically_trivial(X: ToricSurface, D: TDivisor) -> bool:
    return all(d == 0 for d in degrees(X, D))


def ample_divisor(X: ToricSurface) -> TDivisor:
    """An integral ample divisor, built from a lattice-free polygon whose
    inward edge normals are exactly the rays.

    Edge i has direction (v_i.y, -v_i.x) and length l_i > 0 with
    sum l_i v_i = 0; such l exists because the rays positively span N.
    """
    fan = X.fan
    n = fan.n
    lengths = [Fraction(0)] * n
    for i, v in enumerate(fan.rays):
        lengths[i] += 1
        k = fan.cone_containing(-v)
        a, b = fan.rays[k], fan.rays[(k + 1) % n]
        m = det(a, b)
        # -v = alpha a + beta b
        lengths[k] += Fraction(det(-v, b), m)
        lengths[(k + 1) % n] += Fraction(det(a, -v), m)
    den = 1
    for x in lengths:
        den = den * x.denominator // gcd(den, x.denominator)
    ell = [int(x * den) for x in lengths]
    px, py = 0, 0
    coeffs = []
    for i, v in enumerate(fan.rays):
        coeffs.append(-(px * v.x + py * v.y))
        px, py = px + ell[i] * v.y, py - ell[i] * v.x
    assert (px, py) == (0, 0)
    D = TDivisor.of(coeffs)
    assert is_ample(X, D)
    return D


# -- effectivity ---------------------------------------------------------------


@dataclass(frozen=True)
class EffectiveRep:
    u: tuple[Fraction, Fraction]
    coeffs: TDivisor


def section_polygon(X: ToricSurface, D: TDivisor) -> pg.Polygon:
    """P_D = {u in M_Q : <u, v_i> >= -a_i}; bounded because the fan is complete."""
    hs = [pg.HalfPlane(Fraction(-r.x), Fraction(-r.y), a) for r, a in zip(X.fan.rays, D.coeffs)]
    return pg.polygon(hs)


def effective_representation(X: ToricSurface, D: TDivisor) -> Optional[EffectiveRep]:
    """Some u with D + div(chi^u) >= 0, or None. u = 0 is preferred, then the
    lexicographically smallest vertex of P_D."""
    if all(a >= 0 for a in D.coeffs):
        return EffectiveRep((ZERO, ZERO), D)
    P = section_polygon(X, D)
    if P.empty:
        return None
    u = min(P.vertices)
    return EffectiveRep(u, D + principal(X, u))


def is_pseudo_effective(X: ToricSurface, D: TDivisor) -> bool:
    return effective_representation(X, D) is not None


def is_big(X: ToricSurface, D: TDivisor) -> bool:
    return section_polygon(X, D).dim == 2


# -- ample models ---------------------------------------------------------------


@dataclass(frozen=True)
class ContractionMorphism:
    """A composite of elementary fan maps from ``source``.

    ``removed`` lists the contracted rays (as vectors of the source fan);
    ``form`` is set when the composite ends in a projection to P^1.
    """

    source: ToricSurface
    steps: tuple[FanMap, ...] = field(default=())

    @property
    def target(self) -> Union[ToricSurface, P1Fan, None]:
        if not self.steps:
            return self.source
        last = self.steps[-1]
        if last.kind == "ray-removal":
            return ToricSurface(last.target)
        return last.target

    @property
    def kind(self) -> str:
        if not self.steps:
            return "identity"
        last = self.steps[-1].kind
        return {"ray-removal": "birational", "lattice-projection": "fibration", "collapse-to-point": "point"}[last]

    @property
    def removed(self) -> frozenset:
        return frozenset(s.removed for s in self.steps if s.kind == "ray-removal")

    @property
    def form(self) -> Optional[tuple[int, int]]:
        for s in self.steps:
            if s.kind == "lattice-projection":
                return normalize_form(s.form)
        return None

    @property
    def target_rank(self) -> int:
        k = self.kind
        if k in ("identity", "birational"):
            return self.source.picard_rank - len(self.removed)
        return 1 if k == "fibration" else 0

    @property
    def relative_picard(self) -> int:
        return self.source.picard_rank - self.target_rank

    @property
    def key(self) -> tuple:
        """Identity of the contraction up to isomorphism of the target."""
        k = self.kind
        if k in ("identity", "birational"):
            return ("bir", tuple(sorted(self.removed)))
        if k == "fibration":
            return ("fib", self.form)
        return ("pt",)


def contraction_from_key(X: ToricSurface, key: tuple) -> ContractionMorphism:
    if key[0] == "bir":
        return ContractionMorphism(X, tuple(remove_rays(X.fan, key[1])))
    if key[0] == "fib":
        return ContractionMorphism(X, (project_fan(X.fan, key[1]),))
    return ContractionMorphism(X, (collapse(X.fan),))


def ample_model_of_nef(X: ToricSurface, D: TDivisor) -> ContractionMorphism:
    """The contraction defined by a nef divisor: exactly the curves of degree
    zero are contracted."""
    degs = degrees(X, D)
    if any(d < 0 for d in degs):
        raise ValueError("ample_model_of_nef needs a nef divisor")
    zero = [j for j, d in enumerate(degs) if d == 0]
    if not zero:
        return ContractionMorphism(X)
    if len(zero) == X.n:
        return ContractionMorphism(X, (collapse(X.fan),))
    positive = [X.fan.rays[j] for j in range(X.n) if degs[j] > 0]
    if len(positive) == 2 and positive[0] == -positive[1]:
        r = positive[0]
        form = normalize_form((-r.y, r.x))
        assert fibration_ok(X.fan, form)
        return ContractionMorphism(X, (project_fan(X.fan, form),))
    try:
        steps = remove_rays(X.fan, [X.fan.rays[j] for j in zero])
    except FanError as exc:  # pragma: no cover - contradicts semiampleness
        raise AssertionError(f"zero curves of a nef divisor are not contractible: {exc}") from exc
    return ContractionMorphism(X, tuple(steps))


def fiber_class(X: ToricSurface, form: Sequence[int]) -> TDivisor:
    """Pullback of a point of P^1 along the projection ``form``."""
    return TDivisor(tuple(Fraction(max(pair(form, r), 0)) for r in X.fan.rays))
