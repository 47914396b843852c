"""Geography of log models on a two-parameter slice of boundary divisors.

A slice is Theta(s, t) = origin + A + s*B1 + t*B2 on a toric surface Z. The
``origin`` is torus-invariant with coefficients in [0, 1]; A, B1 and B2 are
classes realized by general members, so only their classes enter and the
box on (s, t) is what keeps their coefficients bounded.

For each birational model Z -> X_S (remove the rays S) the weak lc region
W_S is a rational polygon. Every face of every W_S carries a single ample
model, read off from which nef inequalities are tight there; these faces are
the cells of the decomposition.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from . import polygon as pg
from .lattice_fan import Fan, FanError, Vec, det, remove_rays
from .mmp import LogPair, run_mmp
from .rational import fmt
from .toric_surface import (
    ContractionMorphism,
    TDivisor,
    ToricSurface,
    ample_model_of_nef,
    canonical_divisor,
    degrees,
    effective_representation,
    exceptional_part,
    is_ample,
    numerical_class,
    pushforward,
)
from .numerical_surface import rank


class GeographyError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class ConsistencyError(AssertionError):
    """An internal invariant failed; this always indicates a bug."""


# -- model keys -------------------------------------------------------------------
# ("bir", rays) for the birational model removing ``rays`` (sorted),
# ("fib", form) for a projection to P^1, ("pt",) for the point.


def bir_key(rays: Iterable[Vec]) -> tuple:
    return ("bir", tuple(sorted(Vec(*r) for r in rays)))


def key_rank(Z: ToricSurface, key: tuple) -> int:
    if key[0] == "bir":
        return Z.picard_rank - len(key[1])
    return 1 if key[0] == "fib" else 0


def key_id(key: tuple) -> str:
    if key[0] == "bir":
        return "Z" + "".join(f"-{r}" for r in key[1])
    if key[0] == "fib":
        return f"P1[{key[1][0]},{key[1][1]}]"
    return "pt"


def key_from_contraction(cm: ContractionMorphism, removed_first: Sequence[Vec] = ()) -> tuple:
    if cm.kind in ("identity", "birational"):
        return bir_key(tuple(removed_first) + tuple(cm.removed))
    return cm.key


# -- slices -------------------------------------------------------------------------


@dataclass(frozen=True)
class Slice:
    Z: ToricSurface
    A: TDivisor
    origin: TDivisor
    B1: TDivisor
    B2: TDivisor
    box: tuple = (Fraction(0), Fraction(1), Fraction(0), Fraction(1))

    def __post_init__(self):
        n = self.Z.n
        for name in ("A", "origin", "B1", "B2"):
            if len(getattr(self, name)) != n:
                raise GeographyError("bad_slice", f"{name} has the wrong number of coefficients")
        object.__setattr__(self, "box", tuple(Fraction(x) for x in self.box))
        s0, s1, t0, t1 = self.box
        if not (0 <= s0 < s1 and 0 <= t0 < t1):
            raise GeographyError("bad_slice", "box must be nondegenerate with s, t >= 0")
        if any(not 0 <= c <= 1 for c in self.origin):
            raise GeographyError("bad_slice", "origin coefficients must lie in [0, 1]")
        if not is_ample(self.Z, self.A):
            raise GeographyError("bad_slice", "A is not ample")
        if self.class_rank() != min(2, self.Z.picard_rank):
            raise GeographyError("degenerate_slice", "the slice directions B1, B2 have degenerate classes")

    def class_rank(self) -> int:
        return rank([numerical_class(self.Z, self.B1), numerical_class(self.Z, self.B2)])

    @property
    def D0(self) -> TDivisor:
        """K + origin + A: the log canonical divisor at (0, 0)."""
        return canonical_divisor(self.Z) + self.origin + self.A

    def general(self, s, t) -> TDivisor:
        return self.A + self.B1 * s + self.B2 * t

    def lc_divisor(self, s, t) -> TDivisor:
        return self.D0 + self.B1 * s + self.B2 * t

    def pair(self, s, t) -> LogPair:
        return LogPair(self.Z, self.origin, self.general(s, t))

    def box_halfplanes(self) -> list[pg.HalfPlane]:
        return pg.box(*self.box)

    def on_box_boundary(self, p) -> bool:
        s0, s1, t0, t1 = self.box
        return p[0] in (s0, s1) or p[1] in (t0, t1)

    def in_open_box(self, p) -> bool:
        s0, s1, t0, t1 = self.box
        return s0 < p[0] < s1 and t0 < p[1] < t1

    def to_json(self) -> dict:
        return {
            "rays": [[r.x, r.y] for r in self.Z.fan.rays],
            "A": self.A.to_json(),
            "origin": self.origin.to_json(),
            "B1": self.B1.to_json(),
            "B2": self.B2.to_json(),
            "box": [fmt(x) for x in self.box],
        }


@dataclass(frozen=True)
class ModelRecord:
    id: str
    removed: tuple[Vec, ...]
    fan: Fan
    contraction: ContractionMorphism

    @property
    def key(self) -> tuple:
        return bir_key(self.removed)

    @property
    def surface(self) -> ToricSurface:
        return ToricSurface(self.fan)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "removed": [[r.x, r.y] for r in self.removed],
            "rays": [[r.x, r.y] for r in self.fan.rays],
            "picard_rank": self.fan.n - 2,
        }


def _coarsening_valid(rays: Sequence[Vec]) -> bool:
    n = len(rays)
    return n >= 3 and all(det(rays[i], rays[(i + 1) % n]) > 0 for i in range(n))


def enumerate_models(slice_or_surface) -> list[ModelRecord]:
    """All ray sets S whose removal leaves a complete fan, S = {} first."""
    Z = slice_or_surface.Z if isinstance(slice_or_surface, Slice) else slice_or_surface
    fan = Z.fan
    out = []
    for size in range(0, fan.n - 2):
        for idx in combinations(range(fan.n), size):
            keep = [r for i, r in enumerate(fan.rays) if i not in idx]
            if not _coarsening_valid(keep):
                continue
            removed = tuple(fan.rays[i] for i in idx)
            steps = tuple(remove_rays(fan, removed))
            target = steps[-1].target if steps else fan
            out.append(ModelRecord(key_id(bir_key(removed)), removed, target, ContractionMorphism(Z, steps)))
    return out


# -- weak lc regions ----------------------------------------------------------------


def _ge_zero(v0: Fraction, v1: Fraction, v2: Fraction, tag) -> pg.HalfPlane:
    """v0 + v1*s + v2*t >= 0 as a half-plane."""
    return pg.HalfPlane(-v1, -v2, v0, tag)


def model_constraints(sl: Slice, model: ModelRecord) -> list[pg.HalfPlane]:
    Zfan, Xfan = sl.Z.fan, model.fan
    X = ToricSurface(Xfan)
    parts = (sl.D0, sl.B1, sl.B2)
    hs = sl.box_halfplanes()
    exc = [exceptional_part(D, Zfan, Xfan) for D in parts]
    for e in model.removed:
        hs.append(_ge_zero(exc[0][e], exc[1][e], exc[2][e], ("neg", e)))
    degs = [degrees(X, pushforward(D, Zfan, Xfan)) for D in parts]
    for j, r in enumerate(Xfan.rays):
        hs.append(_ge_zero(degs[0][j], degs[1][j], degs[2][j], ("nef", r)))
    return hs


def region_weak_lc(sl: Slice, model: ModelRecord) -> pg.Polygon:
    return pg.polygon(model_constraints(sl, model))


def key_at(sl: Slice, model: ModelRecord, p) -> tuple:
    """Ample model at p, read on X_S; p must lie in W_S."""
    D = pushforward(sl.lc_divisor(*p), sl.Z.fan, model.fan)
    return key_from_contraction(ample_model_of_nef(model.surface, D), model.removed)


# -- decomposition ------------------------------------------------------------------


@dataclass(frozen=True)
class Cell:
    polygon: pg.Polygon
    key: tuple

    @property
    def dim(self) -> int:
        return self.polygon.dim


@dataclass(frozen=True)
class Chamber:
    id: str
    key: tuple
    polygon: pg.Polygon
    rank: int

    @property
    def dim(self) -> int:
        return self.polygon.dim

    @property
    def model_id(self) -> str:
        return key_id(self.key)

    def to_json(self) -> dict:
        hs = [h for h in self.polygon.halfplanes if not h.is_trivial()]
        return {
            "id": self.id,
            "model": self.model_id,
            "dim": self.dim,
            "picard_rank": self.rank,
            "halfplanes": [list(h.integer_triple()) for h in hs],
            "vertices": [[fmt(v[0]), fmt(v[1])] for v in self.polygon.vertices],
        }


@dataclass(frozen=True)
class Wall:
    kind: str  # "divisorial", "mori-fiber", "boundary-of-B"
    chambers: tuple[str, ...]
    segment: tuple
    wall_key: Optional[tuple] = None
    relative_picard: Optional[int] = None

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "chambers": list(self.chambers),
            "segment": [[fmt(p[0]), fmt(p[1])] for p in self.segment],
        }
        if self.wall_key is not None:
            out["model_on_wall"] = key_id(self.wall_key)
        if self.relative_picard is not None:
            out["relative_picard"] = self.relative_picard
        return out


@dataclass
class Checks:
    area_partition: bool = True
    closure_law: list = field(default_factory=list)
    rho_law: list = field(default_factory=list)
    dichotomy: list = field(default_factory=list)
    overlaps: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.area_partition and not (self.closure_law or self.rho_law or self.dichotomy or self.overlaps)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "area_partition": self.area_partition,
            "closure_law_failures": [str(x) for x in self.closure_law],
            "rho_law_failures": [str(x) for x in self.rho_law],
            "dichotomy_failures": [str(x) for x in self.dichotomy],
            "overlaps": [str(x) for x in self.overlaps],
        }


@dataclass
class ChamberDecomposition:
    slice: Slice
    models: list[ModelRecord]
    regions: dict  # model id -> W polygon (nonempty only)
    cells: list[Cell]
    chambers: list[Chamber]
    E: pg.Polygon
    walls: list[Wall] = field(default_factory=list)
    checks: Checks = field(default_factory=Checks)

    @property
    def model_by_id(self) -> dict:
        return {m.id: m for m in self.models}

    @property
    def full_chambers(self) -> list[Chamber]:
        return [c for c in self.chambers if c.dim == 2]

    def chamber(self, cid: str) -> Chamber:
        for c in self.chambers:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def chamber_for_key(self, key: tuple) -> Optional[Chamber]:
        for c in self.full_chambers:
            if c.key == key:
                return c
        return None

    def keys_at(self, p) -> set:
        """Ample models at p computed on every W_S containing p."""
        by_id = self.model_by_id
        return {key_at(self.slice, by_id[mid], p) for mid, W in self.regions.items() if W.contains(p)}

    def locate(self, p) -> Optional[tuple]:
        keys = self.keys_at(p)
        if len(keys) > 1:
            raise ConsistencyError(f"ample model not unique at {p}: {sorted(map(key_id, keys))}")
        return next(iter(keys)) if keys else None

    def label(self, p) -> Optional[tuple]:
        """The decomposition's own label: the key of a cell whose relative
        interior contains p."""
        for c in self.cells:
            if c.polygon.in_relative_interior(p):
                return c.key
        return None

    def incident_full(self, p) -> list[Chamber]:
        return [c for c in self.full_chambers if c.polygon.contains(p)]

    def on_E_boundary(self, p) -> bool:
        if self.E.dim < 2:
            return self.E.contains(p)
        return any(pg.on_segment(tuple(p), a, b) for a, b in self.E.edges())

    def to_json(self) -> dict:
        return {
            "slice": self.slice.to_json(),
            "models": [m.to_json() for m in self.models],
            "chambers": [c.to_json() for c in self.chambers],
            "walls": [w.to_json() for w in self.walls],
            "E_vertices": [[fmt(v[0]), fmt(v[1])] for v in self.E.vertices],
            "checks": self.checks.to_json(),
        }


def _cell_key(cell: Cell) -> frozenset:
    return frozenset(cell.polygon.vertices)


def _merge_lower(cells: list[Cell]) -> list[pg.Polygon]:
    """Merge collinear touching segments of one key; drop covered points."""
    segs = [tuple(c.polygon.vertices) for c in cells if c.dim == 1]
    changed = True
    while changed:
        changed = False
        for i, j in combinations(range(len(segs)), 2):
            a, b = segs[i]
            c, d = segs[j]
            if pg.cross(a, b, c) == 0 and pg.cross(a, b, d) == 0 and (
                pg.on_segment(c, a, b) or pg.on_segment(d, a, b) or pg.on_segment(a, c, d)
            ):
                pts = sorted({a, b, c, d})
                segs[i] = (pts[0], pts[-1])
                del segs[j]
                changed = True
                break
    out = [pg.from_points(s) for s in segs]
    for c in cells:
        if c.dim == 0:
            v = c.polygon.vertices[0]
            if not any(pg.on_segment(v, *s) for s in segs):
                out.append(c.polygon)
    uniq = {}
    for p in out:
        uniq.setdefault(tuple(sorted(p.vertices)), p)
    return [uniq[k] for k in sorted(uniq)]


def decompose(sl: Slice) -> ChamberDecomposition:
    models = enumerate_models(sl)
    regions = {}
    for m in models:
        W = region_weak_lc(sl, m)
        if not W.empty:
            regions[m.id] = W
    if not regions:
        raise GeographyError("empty_E", "K + Theta is not pseudo-effective anywhere in the box")
    by_id = {m.id: m for m in models}
    checks = Checks()

    cells: dict[frozenset, Cell] = {}
    for mid, W in regions.items():
        for face in W.faces():
            key = key_at(sl, by_id[mid], face.centroid)
            ck = frozenset(face.vertices)
            if ck in cells and cells[ck].key != key:
                raise ConsistencyError(
                    f"face {sorted(ck)} has ample models {key_id(cells[ck].key)} and {key_id(key)}"
                )
            cells.setdefault(ck, Cell(face, key))
    cell_list = [cells[k] for k in sorted(cells, key=lambda k: (-len(k), sorted(k)))]

    Z = sl.Z
    chambers: list[Chamber] = []
    for mid, W in regions.items():
        if W.dim != 2:
            continue
        key = key_at(sl, by_id[mid], W.centroid)
        if key != by_id[mid].key:
            checks.closure_law.append(f"{mid}: interior ample model is {key_id(key)}")
            continue
        chambers.append(Chamber(mid, key, W, key_rank(Z, key)))
    full_keys = {c.key for c in chambers}

    lower: dict[tuple, list[Cell]] = {}
    for c in cell_list:
        if c.key not in full_keys:
            lower.setdefault(c.key, []).append(c)
    for key in sorted(lower, key=key_id):
        polys = _merge_lower(lower[key])
        for i, P in enumerate(polys):
            cid = key_id(key) if len(polys) == 1 else f"{key_id(key)}#{i + 1}"
            chambers.append(Chamber(cid, key, P, key_rank(Z, key)))

    E = pg.from_points(v for W in regions.values() for v in W.vertices)
    decomp = ChamberDecomposition(sl, models, regions, cell_list, chambers, E, checks=checks)

    full = decomp.full_chambers
    if E.dim == 2:
        checks.area_partition = sum(c.polygon.area for c in full) == E.area
    for a, b in combinations(full, 2):
        if a.polygon.intersect(b.polygon).dim == 2:
            checks.overlaps.append(f"{a.id} and {b.id} overlap")
    decomp.walls = adjacency(decomp)
    check_rho_law(decomp)
    return decomp


# -- walls --------------------------------------------------------------------------


def _points_on(a, b, pts) -> list:
    found = {a, b}
    for v in pts:
        if pg.on_segment(v, a, b):
            found.add(v)
    return sorted(found, key=lambda v: (v[0] - a[0]) * (b[0] - a[0]) + (v[1] - a[1]) * (b[1] - a[1]))


def _on_box_line(sl: Slice, p, q) -> bool:
    s0, s1, t0, t1 = sl.box
    return (p[0] == q[0] and p[0] in (s0, s1)) or (p[1] == q[1] and p[1] in (t0, t1))


def adjacency(decomp: ChamberDecomposition) -> list[Wall]:
    """Walls of the two-dimensional chambers, every edge fully classified.

    Raises ConsistencyError when a divisorial wall breaks the rho-drop law;
    dichotomy failures are recorded in ``decomp.checks``.
    """
    sl = decomp.slice
    Z = sl.Z
    full = decomp.full_chambers
    breakpoints = set(decomp.E.vertices)
    for c in decomp.chambers:
        breakpoints.update(c.polygon.vertices)
    walls: dict = {}
    for C in full:
        for a, b in C.polygon.edges():
            pts = _points_on(a, b, breakpoints)
            pieces = []
            for p, q in zip(pts, pts[1:]):
                m = pg.midpoint(p, q)
                others = [D for D in full if D.id != C.id and D.polygon.contains(m)]
                if others:
                    if len(others) > 1:
                        raise ConsistencyError(f"edge point {m} lies in three 2D chambers")
                    pieces.append((("divisorial", others[0].id), p, q))
                elif _on_box_line(sl, p, q):
                    pieces.append((("boundary-of-B", None), p, q))
                elif decomp.on_E_boundary(m):
                    pieces.append((("mori-fiber", decomp.label(m)), p, q))
                else:
                    decomp.checks.dichotomy.append(f"edge piece {p}-{q} of {C.id} is unclassified")
            merged = []
            for tag, p, q in pieces:
                if merged and merged[-1][0] == tag and merged[-1][2] == p:
                    merged[-1] = (tag, merged[-1][1], q)
                else:
                    merged.append((tag, p, q))
            for (kind, other), p, q in merged:
                seg = tuple(sorted((p, q)))
                m = pg.midpoint(p, q)
                wkey = decomp.label(m)
                if kind == "divisorial":
                    D = decomp.chamber(other)
                    hi, lo = (C, D) if C.rank > D.rank else (D, C)
                    rel = hi.rank - lo.rank
                    inter = C.polygon.intersect(D.polygon).dim
                    if rel != 2 - inter or wkey != lo.key:
                        raise ConsistencyError(
                            f"wall {seg} between {hi.id} and {lo.id}: rho drop {rel}, "
                            f"intersection dim {inter}, model on wall {key_id(wkey)}"
                        )
                    walls.setdefault((kind, seg), Wall(kind, (hi.id, lo.id), seg, wkey, rel))
                elif kind == "mori-fiber":
                    target = _lower_chamber_at(decomp, m)
                    rel = C.rank - key_rank(Z, wkey)
                    if rel != 1:
                        decomp.checks.rho_law.append(f"mori-fiber wall {seg} of {C.id}: rho drop {rel}")
                    walls.setdefault((kind, seg, C.id), Wall(kind, (C.id, target), seg, wkey, rel))
                else:
                    walls.setdefault((kind, seg, C.id), Wall(kind, (C.id,), seg, wkey))
    return [walls[k] for k in sorted(walls, key=lambda k: (k[0], k[1], k[2:]))]


def _lower_chamber_at(decomp: ChamberDecomposition, p) -> str:
    for c in decomp.chambers:
        if c.dim < 2 and c.polygon.contains(p):
            return c.id
    return key_id(decomp.label(p))


def check_rho_law(decomp: ChamberDecomposition) -> None:
    """rho(X_i) - rho(X_j) = 2 - dim(C_i cap C_j) whenever A_j meets a 2D
    chamber C_i away from the box boundary."""
    sl = decomp.slice
    by_key: dict = {}
    for c in decomp.cells:
        by_key.setdefault(c.key, []).append(c)
    for Ci in decomp.full_chambers:
        for key, cells in by_key.items():
            if key == Ci.key:
                continue
            witnesses = [
                c for c in cells if Ci.polygon.contains(c.polygon.centroid) and sl.in_open_box(c.polygon.centroid)
            ]
            if not witnesses:
                continue
            Cj = decomp.chamber_for_key(key)
            if Cj is not None:
                inter = Ci.polygon.intersect(Cj.polygon).dim
            else:
                inter = max(Ci.polygon.intersect(c.polygon).dim for c in cells)
            drop = Ci.rank - key_rank(sl.Z, key)
            if drop != 2 - inter:
                decomp.checks.rho_law.append(
                    f"{Ci.id} vs {key_id(key)}: rho drop {drop}, dim of intersection {inter}"
                )


# -- sampling and independent checks --------------------------------------------------


def _radical_inverse(i: int, base: int) -> Fraction:
    f, denom = Fraction(0), 1
    while i:
        denom *= base
        i, r = divmod(i, base)
        f += Fraction(r, denom)
    return f


def sample_points(decomp: ChamberDecomposition, count: int, start: int = 1) -> list:
    """Quasi-random (Halton) rational points of E, plus all cell centroids."""
    s0, s1, t0, t1 = decomp.slice.box
    out = [c.polygon.centroid for c in decomp.cells]
    i = start
    while len(out) < count:
        p = (s0 + (s1 - s0) * _radical_inverse(i, 2), t0 + (t1 - t0) * _radical_inverse(i, 3))
        i += 1
        if decomp.E.contains(p):
            out.append(p)
    return out[:count] if len(out) > count else out


def oracle_key(sl: Slice, p, strategy: str = "first-index") -> Optional[tuple]:
    """Ample model at p by running the MMP and taking the ample model of the
    result; None when the run ends in a Mori fibre space."""
    trace = run_mmp(sl.pair(*p), strategy)
    if trace.status != "minimal_model":
        return None
    end = trace.end
    cm = ample_model_of_nef(end.surface, end.log_canonical)
    return key_from_contraction(cm, trace.removed)


def pseudo_effective_at(sl: Slice, p) -> bool:
    return effective_representation(sl.Z, sl.lc_divisor(*p)) is not None


# -- SVG ------------------------------------------------------------------------------


def model_color(model_id: str) -> str:
    h = hashlib.sha256(model_id.encode()).digest()
    return "#%02x%02x%02x" % (96 + h[0] % 144, 96 + h[1] % 144, 96 + h[2] % 144)


def render_svg(decomp: ChamberDecomposition, path: Sequence = (), marks: Sequence = ()) -> str:
    size, margin = 800, 60
    s0, s1, t0, t1 = decomp.slice.box
    scale_s = Fraction(size - 2 * margin) / (s1 - s0)
    scale_t = Fraction(size - 2 * margin) / (t1 - t0)

    def xy(p) -> str:
        x = margin + (p[0] - s0) * scale_s
        y = size - margin - (p[1] - t0) * scale_t
        return f"{float(x):.3f},{float(y):.3f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>',
        f'<polygon points="{" ".join(xy(v) for v in ((s0, t0), (s1, t0), (s1, t1), (s0, t1)))}" '
        'fill="none" stroke="#444444" stroke-width="1"/>',
    ]
    for c in decomp.full_chambers:
        out.append(
            f'<polygon id="{c.id}" points="{" ".join(xy(v) for v in c.polygon.vertices)}" '
            f'fill="{model_color(c.model_id)}" fill-opacity="0.75" stroke="#222222" stroke-width="1"/>'
        )
        cx = c.polygon.centroid
        out.append(f'<text x="{xy(cx).split(",")[0]}" y="{xy(cx).split(",")[1]}" font-size="12" '
                   f'text-anchor="middle">{c.id}</text>')
    if decomp.E.dim == 2:
        out.append(
            f'<polygon points="{" ".join(xy(v) for v in decomp.E.vertices)}" fill="none" '
            'stroke="#000000" stroke-width="3"/>'
        )
    for c in decomp.chambers:
        if c.dim == 1:
            a, b = c.polygon.vertices
            out.append(
                f'<polyline points="{xy(a)} {xy(b)}" stroke="{model_color(c.model_id)}" '
                'stroke-width="6" fill="none"/>'
            )
        elif c.dim == 0:
            x, y = xy(c.polygon.vertices[0]).split(",")
            out.append(f'<circle cx="{x}" cy="{y}" r="5" fill="{model_color(c.model_id)}"/>')
    if path:
        out.append(
            f'<polyline points="{" ".join(xy(p) for p in path)}" stroke="#d00000" '
            'stroke-width="4" fill="none" stroke-dasharray="8,4"/>'
        )
    for p in marks:
        x, y = xy(p).split(",")
        out.append(f'<circle cx="{x}" cy="{y}" r="7" fill="#d00000"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
