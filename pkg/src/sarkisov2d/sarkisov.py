"""Factor the birational map between two Mori fibre space outputs into
Sarkisov links.

Pipeline: build a two-parameter slice whose pseudo-effective region E has
both Mori fibre spaces on its boundary, decompose it into ample-model
chambers, walk the non-big part of the boundary of E from one endpoint to the
other, and read one link off every point where the incident chambers change.
"""
from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Optional, Sequence

from . import polygon as pg
from .geography import (
    ChamberDecomposition,
    ConsistencyError,
    GeographyError,
    Slice,
    bir_key,
    decompose,
    key_id,
    key_rank,
)
from .lattice_fan import (
    Fan,
    FanError,
    P1Fan,
    Vec,
    det,
    fan_isomorphic,
    parse_fan,
    project_fan,
    remove_rays,
)
from .mmp import LogPair, MMPTrace, run_mmp
from .rational import fmt
from .toric_surface import (
    TDivisor,
    ToricSurface,
    ample_divisor,
    canonical_divisor,
    degrees,
    effective_representation,
    exceptional_part,
    fiber_class,
    is_ample,
    pullback,
    pushforward,
)

BOX_SIDE = Fraction(2)
MAX_ROUNDS = 8
MAX_HALVINGS = 40


class SarkisovError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


# -- Mori fibre spaces --------------------------------------------------------------


@dataclass(frozen=True)
class MoriFiberSpace:
    """A model X of Z (rays ``removed``) with its fibration key."""

    removed: tuple[Vec, ...]
    fan: Fan
    base: tuple

    @property
    def key(self) -> tuple:
        return bir_key(self.removed)

    def same_as(self, other: "MoriFiberSpace") -> bool:
        return self.key == other.key and self.base == other.base

    def isomorphic_to(self, other: "MoriFiberSpace") -> bool:
        """Fan isomorphism of total spaces, compatible with the bases."""
        if self.base[0] != other.base[0]:
            return False
        m = fan_isomorphic(self.fan, other.fan)
        if m is None:
            return False
        if self.base[0] == "pt":
            return True
        # the projection must be carried along: form' o M = +-form
        a, b = other.base[1]
        pulled = (a * m[0][0] + b * m[1][0], a * m[0][1] + b * m[1][1])
        return pulled in (self.base[1], (-self.base[1][0], -self.base[1][1])) or self.same_as(other)

    def to_json(self) -> dict:
        return {
            "model": key_id(self.key),
            "rays": [[r.x, r.y] for r in self.fan.rays],
            "base": "point" if self.base[0] == "pt" else "P1",
            "form": list(self.base[1]) if self.base[0] == "fib" else None,
        }


def mfs_of_trace(trace: MMPTrace) -> MoriFiberSpace:
    if trace.base_key is None:
        raise SarkisovError("not_mfs", f"run with strategy {trace.strategy} ends in a minimal model, not a Mori fibre space")
    return MoriFiberSpace(tuple(trace.removed), trace.end.fan, trace.base_key)


# -- slice construction ----------------------------------------------------------------


@dataclass
class SliceBuild:
    slice: Slice
    decomposition: ChamberDecomposition
    theta0: tuple
    theta1: tuple
    boundary: list
    path: list
    rounds: int
    delta: Fraction
    log: list = field(default_factory=list)


def _relatively_ample(X: ToricSurface, D: TDivisor, base: tuple) -> bool:
    if base[0] == "pt":
        return is_ample(X, D)
    form = base[1]
    degs = degrees(X, D)
    return all(degs[j] > 0 for j, r in enumerate(X.fan.rays) if form[0] * r.x + form[1] * r.y != 0)


def _ample_part(Z: ToricSurface, Phi0: TDivisor, H: TDivisor, mfs: MoriFiberSpace) -> Optional[TDivisor]:
    """F = f^* F1 with F1 = -(K_X + f_* Phi0 + f_* H) + phi^* C, C the least
    power of two (zero over a point) making F1 ample; None if impossible."""
    X = ToricSurface(mfs.fan)
    minus = -pushforward(canonical_divisor(Z) + Phi0 + H, Z.fan, X.fan)
    if mfs.base[0] == "pt":
        F1 = minus
        if not is_ample(X, F1):
            return None
    else:
        fib = fiber_class(X, mfs.base[1])
        c = Fraction(1)
        for _ in range(MAX_HALVINGS):
            if is_ample(X, minus + fib * c):
                break
            c *= 2
        else:
            return None
        F1 = minus + fib * c
    return pullback(F1, X.fan, Z.fan)


def _delta_ok(Z, Phi0, A0, delta, mfs_list) -> Optional[str]:
    H = A0 * (delta * Fraction(5, 4))
    A = A0 * (delta / 4)
    for mfs in mfs_list:
        X = ToricSurface(mfs.fan)
        D = canonical_divisor(Z) + Phi0 + H
        if not _relatively_ample(X, -pushforward(D, Z.fan, X.fan), mfs.base):
            return "-(K+Phi+H) not relatively ample on an output"
        if any(c <= 0 for c in exceptional_part(D, Z.fan, X.fan).values()):
            return "contraction is not (K+Phi+H)-negative"
    if effective_representation(Z, canonical_divisor(Z) + Phi0 + A) is not None:
        return "K+Phi+A is pseudo-effective"
    return None


def _random_divisor(rng: random.Random, n: int) -> TDivisor:
    return TDivisor.of(rng.randint(-3, 3) for _ in range(n))


def _endpoint(decomp: ChamberDecomposition, mfs: MoriFiberSpace) -> tuple:
    C = decomp.chamber_for_key(mfs.key)
    if C is None:
        raise SarkisovError("degenerate_slice", f"chamber of {key_id(mfs.key)} is not two-dimensional")
    sl = decomp.slice
    cands = []
    for cell in decomp.cells:
        if cell.key != mfs.base or cell.dim != 1:
            continue
        a, b = cell.polygon.vertices
        m = pg.midpoint(a, b)
        if C.polygon.contains(a) and C.polygon.contains(b) and sl.in_open_box(m) and decomp.on_E_boundary(m):
            cands.append((a, b))
    if not cands:
        raise SarkisovError(
            "degenerate_slice", f"no boundary segment of {key_id(mfs.base)} on chamber {C.id} inside the box"
        )
    a, b = min(cands)
    return pg.midpoint(a, b)


def build_slice(
    Z: ToricSurface, Phi: TDivisor, runA: MMPTrace, runB: MMPTrace, seed: int = 0
) -> SliceBuild:
    mfsA, mfsB = mfs_of_trace(runA), mfs_of_trace(runB)
    Phi0 = Phi
    A0 = ample_divisor(Z)
    log = []
    delta = None
    for m in range(MAX_HALVINGS):
        d = Fraction(1, 2**m)
        why = _delta_ok(Z, Phi0, A0, d, (mfsA, mfsB))
        if why is None:
            F = _ample_part(Z, Phi0, A0 * (d * Fraction(5, 4)), mfsA)
            G = _ample_part(Z, Phi0, A0 * (d * Fraction(5, 4)), mfsB)
            if F is not None and G is not None:
                delta = d
                break
            why = "no ample F1"
        log.append(f"delta=1/{2**m}: {why}")
    if delta is None:
        raise SarkisovError("no_delta", log[-1] if log else "no admissible delta")
    A = A0 * (delta / 4)
    Hsum = A0 * delta
    B1, B2 = F + Hsum, G + Hsum
    rng = random.Random(seed)
    reason = "not attempted"
    for r in range(MAX_ROUNDS + 1):
        if r:
            eps = Fraction(1, 10**r)
            P1, P2 = B1 + _random_divisor(rng, Z.n) * eps, B2 + _random_divisor(rng, Z.n) * eps
        else:
            P1, P2 = B1, B2
        try:
            sl = Slice(Z, A, Phi0, P1, P2, (0, BOX_SIDE, 0, BOX_SIDE))
            corners = [(0, 0), (BOX_SIDE, 0), (0, BOX_SIDE), (BOX_SIDE, BOX_SIDE)]
            if not all(is_ample(Z, sl.general(s, t) + Phi0 - Phi) for s, t in corners):
                raise SarkisovError("degenerate_slice", "Theta - Phi is not ample on the box")
            decomp = decompose(sl)
            if not decomp.checks.ok:
                raise SarkisovError("degenerate_slice", f"decomposition checks failed: {decomp.checks.to_json()}")
            theta0 = _endpoint(decomp, mfsA)
            theta1 = _endpoint(decomp, mfsB)
            points, path = trace_boundary(decomp, theta0, theta1)
            return SliceBuild(sl, decomp, theta0, theta1, points, path, r, delta, log)
        except (SarkisovError, GeographyError) as exc:
            reason = f"round {r}: {exc}"
            log.append(reason)
    raise SarkisovError("perturbation_exhausted", reason)


# -- boundary walk --------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryPoint:
    point: tuple
    chambers: tuple[str, ...]  # T_1 .. T_k, from the incoming side
    key_in: tuple
    key_out: tuple
    key_here: tuple

    @property
    def k(self) -> int:
        return len(self.chambers)

    def to_json(self) -> dict:
        return {
            "point": [fmt(self.point[0]), fmt(self.point[1])],
            "chambers": list(self.chambers),
            "model_before": key_id(self.key_in),
            "model_after": key_id(self.key_out),
            "model_here": key_id(self.key_here),
        }


def _locate_edge(E: pg.Polygon, p) -> int:
    V = E.vertices
    for i in range(len(V)):
        a, b = V[i], V[(i + 1) % len(V)]
        if pg.on_segment(p, a, b) and p != b:
            return i
    raise SarkisovError("not_on_boundary", f"{p} is not on the boundary of E")


def _ccw_path(E: pg.Polygon, p, q) -> list:
    V = E.vertices
    m = len(V)
    i, j = _locate_edge(E, p), _locate_edge(E, q)
    a = V[i]
    if i == j:
        dp = (p[0] - a[0]) ** 2 + (p[1] - a[1]) ** 2
        dq = (q[0] - a[0]) ** 2 + (q[1] - a[1]) ** 2
        if dq >= dp:
            return [p, q]
    path = [p]
    k = (i + 1) % m
    while True:
        path.append(V[k])
        if k == j:
            break
        k = (k + 1) % m
    path.append(q)
    out = [path[0]]
    for v in path[1:]:
        if v != out[-1]:
            out.append(v)
    return out


def _sorted_along(a, b, pts) -> list:
    found = {a, b} | {v for v in pts if pg.on_segment(v, a, b)}
    return sorted(found, key=lambda v: (v[0] - a[0]) * (b[0] - a[0]) + (v[1] - a[1]) * (b[1] - a[1]))


def _angle_cmp(start):
    def half(w):
        d = det(start, w)
        if d > 0 or (d == 0 and start[0] * w[0] + start[1] * w[1] > 0):
            return 0
        return 1

    def cmp(a, b):
        ha, hb = half(a), half(b)
        if ha != hb:
            return ha - hb
        d = det(a, b)
        return -1 if d > 0 else (1 if d < 0 else 0)

    return cmp


def trace_boundary(decomp: ChamberDecomposition, theta0, theta1) -> tuple[list[BoundaryPoint], list]:
    """Boundary points between theta0 and theta1 and the path walked."""
    sl = decomp.slice
    E = decomp.E
    for name, p in (("theta0", theta0), ("theta1", theta1)):
        if not decomp.on_E_boundary(p):
            raise SarkisovError("not_on_boundary", f"{name} = {p} is not on the boundary of E")
        if not sl.in_open_box(p):
            raise SarkisovError("on_box_boundary", f"{name} = {p} is not interior to the box")
    if E.dim < 2:
        raise SarkisovError("degenerate_slice", "E is not two-dimensional")

    def clean(path):
        return not any(_box_line(sl, a, b) for a, b in zip(path, path[1:]))

    ccw = _ccw_path(E, theta0, theta1)
    cw = list(reversed(_ccw_path(E, theta1, theta0)))
    if theta0 == theta1:
        path, sense = [theta0], 1
    elif clean(ccw):
        path, sense = ccw, 1
    elif clean(cw):
        path, sense = cw, -1
    else:
        raise SarkisovError("no_boundary_path", "both boundary arcs between the endpoints run along the box")

    marks = set(E.vertices)
    for c in decomp.chambers:
        marks.update(c.polygon.vertices)
    for c in decomp.cells:
        marks.update(c.polygon.vertices)
    pts = [path[0]]
    for a, b in zip(path, path[1:]):
        for v in _sorted_along(a, b, marks)[1:]:
            if v != pts[-1]:
                pts.append(v)

    full = decomp.full_chambers
    segs = []
    for a, b in zip(pts, pts[1:]):
        m = pg.midpoint(a, b)
        segs.append((decomp.label(m), frozenset(c.id for c in full if c.polygon.contains(m))))

    out = []
    for i in range(1, len(pts) - 1):
        p = pts[i]
        inc = [c for c in full if c.polygon.contains(p)]
        ids = frozenset(c.id for c in inc)
        (kin, cin), (kout, cout) = segs[i - 1], segs[i]
        if ids == cin and ids == cout and kin == kout:
            continue
        if len(inc) >= 4:
            raise ConsistencyError(f"{len(inc)} chambers meet at boundary point {p}")
        if not inc:
            raise ConsistencyError(f"no two-dimensional chamber at boundary point {p}")
        d_in = (pts[i - 1][0] - p[0], pts[i - 1][1] - p[1])
        # interior is to the left of travel: clockwise from d_in on a ccw walk
        if sense == 1:
            start = (d_in[0], -d_in[1])
            refl = lambda w: (w[0], -w[1])  # noqa: E731
        else:
            start = d_in
            refl = lambda w: w  # noqa: E731
        cmp = _angle_cmp(start)
        dirs = {c.id: refl((c.polygon.centroid[0] - p[0], c.polygon.centroid[1] - p[1])) for c in inc}
        order = sorted(dirs, key=cmp_to_key(lambda a, b: cmp(dirs[a], dirs[b])))
        if order[0] not in cin or order[-1] not in cout:
            raise ConsistencyError(f"chamber order at {p} does not match the adjacent boundary segments")
        out.append(BoundaryPoint(p, tuple(order), kin, kout, decomp.label(p)))
    return out, pts


def _box_line(sl: Slice, a, b) -> bool:
    s0, s1, t0, t1 = sl.box
    return (a[0] == b[0] and a[0] in (s0, s1)) or (a[1] == b[1] and a[1] in (t0, t1))


# -- links ------------------------------------------------------------------------------


@dataclass(frozen=True)
class Arrow:
    name: str
    kind: str  # "divisorial", "fibration", "point", "base"
    source: tuple
    target: tuple
    relative_picard: int
    removed: tuple[Vec, ...] = ()

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "kind": self.kind,
            "source": key_id(self.source),
            "target": key_id(self.target),
            "relative_picard": self.relative_picard,
        }
        if self.removed:
            out["removed"] = [[r.x, r.y] for r in self.removed]
        return out


@dataclass(frozen=True)
class SarkisovLink:
    type: str
    point: tuple
    chambers: tuple[str, ...]
    start: MoriFiberSpace
    end: MoriFiberSpace
    arrows: tuple[Arrow, ...]
    bases: dict

    def to_json(self) -> dict:
        return {
            "type": self.type,
            "point": [fmt(self.point[0]), fmt(self.point[1])],
            "chambers": list(self.chambers),
            "from": self.start.to_json(),
            "to": self.end.to_json(),
            "arrows": [a.to_json() for a in self.arrows],
            "bases": {k: key_id(v) for k, v in sorted(self.bases.items())},
        }


def _model_fan(Z: ToricSurface, key: tuple) -> Fan:
    steps = remove_rays(Z.fan, key[1])
    return steps[-1].target if steps else Z.fan


def _div_arrow(Z: ToricSurface, name: str, src: tuple, tgt: tuple) -> Arrow:
    removed = tuple(sorted(set(tgt[1]) - set(src[1])))
    return Arrow(name, "divisorial", src, tgt, key_rank(Z, src) - key_rank(Z, tgt), removed)


def _fib_arrow(Z: ToricSurface, name: str, src: tuple, base: tuple) -> Arrow:
    kind = "fibration" if base[0] == "fib" else "point"
    return Arrow(name, kind, src, base, key_rank(Z, src) - key_rank(Z, base))


def _base_arrow(Z: ToricSurface, name: str, src: tuple, tgt: tuple) -> Optional[Arrow]:
    if src == tgt:
        return None
    return Arrow(name, "base", src, tgt, key_rank(Z, src) - key_rank(Z, tgt))


def classify_link(bp: BoundaryPoint, decomp: ChamberDecomposition) -> SarkisovLink:
    Z = decomp.slice.Z
    T = [decomp.chamber(c) for c in bp.chambers]
    R = bp.key_here
    rR = key_rank(Z, R)
    first, last = T[0], T[-1]
    start = MoriFiberSpace(first.key[1], _model_fan(Z, first.key), bp.key_in)
    end = MoriFiberSpace(last.key[1], _model_fan(Z, last.key), bp.key_out)
    S, Tb = bp.key_in, bp.key_out
    arrows: list[Optional[Arrow]] = []
    if bp.k == 1:
        if S == Tb or S[0] != "fib" or Tb[0] != "fib":
            raise ConsistencyError(f"k = 1 at {bp.point} without two distinct fibrations")
        kind = "IV"
        arrows = [
            _fib_arrow(Z, "X->S", first.key, S),
            _fib_arrow(Z, "Y->T", last.key, Tb),
            _base_arrow(Z, "S->R", S, R),
            _base_arrow(Z, "T->R", Tb, R),
        ]
    elif bp.k == 2:
        rx, ry = first.rank - rR, last.rank - rR
        if (rx, ry) == (1, 2):
            kind = "I"
            arrows = [
                _div_arrow(Z, "Y->X", last.key, first.key),
                _fib_arrow(Z, "X->S", first.key, S),
                _fib_arrow(Z, "Y->T", last.key, Tb),
                _base_arrow(Z, "S->R", S, R),
                _base_arrow(Z, "T->R", Tb, R),
            ]
        elif (rx, ry) == (2, 1):
            kind = "III"
            arrows = [
                _div_arrow(Z, "X->Y", first.key, last.key),
                _fib_arrow(Z, "X->S", first.key, S),
                _fib_arrow(Z, "Y->T", last.key, Tb),
                _base_arrow(Z, "S->R", S, R),
                _base_arrow(Z, "T->R", Tb, R),
            ]
        else:
            raise ConsistencyError(f"k = 2 at {bp.point} with rho(X/R) = {rx}, rho(Y/R) = {ry}")
    elif bp.k == 3:
        kind = "II"
        mid = T[1]
        arrows = [
            _div_arrow(Z, "X'->X", mid.key, first.key),
            _div_arrow(Z, "Y'->Y", mid.key, last.key),
            _fib_arrow(Z, "X->S", first.key, S),
            _fib_arrow(Z, "Y->T", last.key, Tb),
            _base_arrow(Z, "S->R", S, R),
            _base_arrow(Z, "T->R", Tb, R),
        ]
    else:
        raise ConsistencyError(f"{bp.k} chambers at boundary point {bp.point}")
    return SarkisovLink(
        kind, bp.point, bp.chambers, start, end, tuple(a for a in arrows if a is not None), {"S": S, "T": Tb, "R": R}
    )


@dataclass
class Verification:
    items: list  # (check, passed, detail)

    @property
    def ok(self) -> bool:
        return all(p for _, p, _ in self.items)

    @property
    def failures(self) -> list:
        return [(c, d) for c, p, d in self.items if not p]

    def to_json(self) -> dict:
        return {"ok": self.ok, "items": [{"check": c, "passed": p, "detail": d} for c, p, d in self.items]}


def _is_p1(Z: ToricSurface, model: tuple, base: tuple) -> tuple[bool, str]:
    if base[0] != "fib":
        return False, f"base {key_id(base)} is not a curve"
    try:
        fm = project_fan(_model_fan(Z, model), base[1])
    except FanError as exc:
        return False, str(exc)
    return isinstance(fm.target, P1Fan) and fm.target.rays == (1, -1), f"{key_id(model)} -> P1 along {base[1]}"


def verify_link(link: SarkisovLink, Z: ToricSurface) -> Verification:
    items = []
    # (a) extremal vertical arrows
    for a in link.arrows:
        items.append(("a:relative_picard", a.relative_picard == 1, f"{a.name}: rho drop {a.relative_picard}"))
    # (b) arrows into X or Y are single ray removals
    for a in link.arrows:
        if a.name in ("X'->X", "Y'->Y", "Y->X", "X->Y"):
            ok = a.kind == "divisorial" and len(a.removed) == 1
            if ok:
                try:
                    remove_rays(_model_fan(Z, a.source), a.removed)
                except FanError:
                    ok = False
            items.append(("b:divisorial", ok, f"{a.name} removes {[str(r) for r in a.removed]}"))
    # (c) bases are P^1 where the type demands it
    need = {"I": ["T"], "III": ["S"], "IV": ["S", "T"]}.get(link.type, [])
    for b in need:
        model = link.start.key if b == "S" else link.end.key
        ok, detail = _is_p1(Z, model, link.bases[b])
        items.append((f"c:{b}_is_P1", ok, detail))
    # (d) commutation
    for a in link.arrows:
        if a.kind == "divisorial":
            ok = set(a.source[1]) | set(a.removed) == set(a.target[1])
            items.append(("d:removed_sets", ok, a.name))
        elif a.kind in ("fibration", "point"):
            if a.kind == "fibration":
                ok, _ = _is_p1(Z, a.source, a.target)
            else:
                ok = key_rank(Z, a.source) == 1
            items.append(("d:fibration", ok, a.name))
    S, T, R = link.bases["S"], link.bases["T"], link.bases["R"]
    if link.type == "II":
        items.append(("d:bases_agree", S == T == R or (S == T and key_rank(Z, S) - key_rank(Z, R) == 1), f"{key_id(S)}, {key_id(T)}, {key_id(R)}"))
    if link.type == "IV":
        items.append(("d:same_total_space", link.start.key == link.end.key, key_id(link.start.key)))
    if link.type == "I":
        items.append(("d:S_is_R", S == R, key_id(S)))
    if link.type == "III":
        items.append(("d:T_is_R", T == R, key_id(T)))
    return Verification(items)


# -- the whole pipeline -------------------------------------------------------------------


@dataclass
class LinkChain:
    links: list[SarkisovLink]
    start: MoriFiberSpace
    end: MoriFiberSpace
    build: SliceBuild
    verifications: list[Verification]

    @property
    def types(self) -> list[str]:
        return [l.type for l in self.links]

    def to_json(self) -> dict:
        b = self.build
        return {
            "types": self.types,
            "links": [
                dict(l.to_json(), verification=v.to_json()) for l, v in zip(self.links, self.verifications)
            ],
            "start": self.start.to_json(),
            "end": self.end.to_json(),
            "theta0": [fmt(b.theta0[0]), fmt(b.theta0[1])],
            "theta1": [fmt(b.theta1[0]), fmt(b.theta1[1])],
            "boundary_points": [p.to_json() for p in b.boundary],
            "path": [[fmt(p[0]), fmt(p[1])] for p in b.path],
            "perturbation_rounds": b.rounds,
            "delta": fmt(b.delta),
            "decomposition": b.decomposition.to_json(),
        }


def decompose_sarkisov(
    Z: ToricSurface, Phi: TDivisor, runA: MMPTrace, runB: MMPTrace, seed: int = 0
) -> LinkChain:
    mfsA, mfsB = mfs_of_trace(runA), mfs_of_trace(runB)
    build = build_slice(Z, Phi, runA, runB, seed)
    links = [classify_link(bp, build.decomposition) for bp in build.boundary]
    checks = [verify_link(l, Z) for l in links]
    for l, v in zip(links, checks):
        if not v.ok:
            raise SarkisovError("link_verification_failed", f"Type {l.type} link at {l.point}: {v.failures}")
    for a, b in zip(links, links[1:]):
        if not a.end.same_as(b.start):
            raise ConsistencyError(f"links at {a.point} and {b.point} do not share a Mori fibre space")
    first = links[0].start if links else mfsA
    last = links[-1].end if links else mfsA
    for got, want, side in ((first, mfsA, "runA"), (last, mfsB, "runB")):
        if not (got.same_as(want) or got.isomorphic_to(want)):
            raise SarkisovError(
                "endpoint_mismatch",
                f"{side}: chain gives {got.to_json()}, expected {want.to_json()}",
            )
    return LinkChain(links, mfsA, mfsB, build, checks)


# -- scenarios ----------------------------------------------------------------------------


@dataclass
class Scenario:
    fan: Fan
    phi: dict
    strategy_a: str
    strategy_b: str
    seed: Optional[int]
    fan_path: str

    @property
    def surface(self) -> ToricSurface:
        return ToricSurface(self.fan)

    @property
    def boundary(self) -> TDivisor:
        return TDivisor.of(self.phi.get(i, 0) for i in range(self.fan.n))

    def runs(self) -> tuple[MMPTrace, MMPTrace]:
        pair = LogPair(self.surface, self.boundary)
        return run_mmp(pair, self.strategy_a), run_mmp(pair, self.strategy_b)

    def swapped(self) -> "Scenario":
        return Scenario(self.fan, self.phi, self.strategy_b, self.strategy_a, self.seed, self.fan_path)


def parse_scenario(text: str, base_dir: str = ".") -> Scenario:
    fan = None
    fan_path = ""
    phi: dict = {}
    runs: dict = {}
    seed = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(None, 1)
        word, rest = parts[0], (parts[1].strip() if len(parts) > 1 else "")
        try:
            if word == "fan":
                fan_path = os.path.join(base_dir, rest)
                with open(fan_path, encoding="utf-8") as fh:
                    fan = parse_fan(fh.read())
            elif word == "phi":
                i, v = rest.split()
                phi[int(i)] = Fraction(v)
            elif word in ("runA", "runB"):
                if not rest.startswith("strategy="):
                    raise SarkisovError("parse_error", f"line {lineno}: expected {word} strategy=<rule>")
                runs[word] = rest[len("strategy="):].strip()
            elif word == "seed":
                seed = int(rest)
            else:
                raise SarkisovError("parse_error", f"line {lineno}: unknown directive {word!r}")
        except OSError as exc:
            raise SarkisovError("missing_file", f"line {lineno}: {exc}") from None
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, (SarkisovError, FanError)):
                raise
            raise SarkisovError("parse_error", f"line {lineno}: {exc}") from None
    if fan is None:
        raise SarkisovError("parse_error", "scenario has no fan line")
    for i in phi:
        if not 0 <= i < fan.n:
            raise SarkisovError("parse_error", f"phi index {i} out of range")
    return Scenario(fan, phi, runs.get("runA", "first-index"), runs.get("runB", "prefer-fibration"), seed, fan_path)
