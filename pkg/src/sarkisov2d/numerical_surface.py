"""A surface known only through numbers: declared curves, their intersection
matrix and canonical degrees.

Nef and extremality tests only look at the declared curves, so every answer
is conditional on the curves generating the cone of curves; the flag
``complete`` records that assumption and is echoed in every report.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .mmp import LogPair, Option, Strategy, ray_label
from .rational import fmt, q
from .toric_surface import canonical_divisor, degrees, intersection_matrix


class NumericalError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def rank(matrix: Sequence[Sequence[Fraction]]) -> int:
    rows = [list(r) for r in matrix]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


@dataclass(frozen=True)
class NumericalSurface:
    labels: tuple[str, ...]
    Q: tuple[tuple[Fraction, ...], ...]
    kdeg: tuple[Fraction, ...]
    complete: bool = True

    def __post_init__(self):
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise NumericalError("duplicate_label", "curve labels must be distinct")
        if len(self.Q) != n or any(len(row) != n for row in self.Q) or len(self.kdeg) != n:
            raise NumericalError("bad_dimensions", "intersection matrix and degrees must match the curve list")
        object.__setattr__(self, "Q", tuple(tuple(q(x) for x in row) for row in self.Q))
        object.__setattr__(self, "kdeg", tuple(q(x) for x in self.kdeg))
        for i in range(n):
            for j in range(i):
                if self.Q[i][j] != self.Q[j][i]:
                    raise NumericalError("not_symmetric", f"Q[{i}][{j}] != Q[{j}][{i}]")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def picard_rank(self) -> int:
        return rank(self.Q)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise NumericalError("unknown_curve", f"no curve labelled {label!r}") from None

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "intersection_matrix": [[fmt(x) for x in row] for row in self.Q],
            "kdeg": [fmt(x) for x in self.kdeg],
            "picard_rank": self.picard_rank,
            "complete": self.complete,
        }


@dataclass(frozen=True)
class NumDivisor:
    degrees: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(q(x) for x in self.degrees))


def _push(values: Sequence[Fraction], Q, k: int) -> list[Fraction]:
    """Degrees of a pushed-forward divisor on the remaining curves."""
    e2 = Q[k][k]
    return [values[i] - values[k] * Q[i][k] / e2 for i in range(len(values)) if i != k]


def contract_curve(S: NumericalSurface, k: int) -> NumericalSurface:
    e2 = S.Q[k][k]
    if e2 >= 0:
        raise NumericalError("not_divisorial", f"curve {S.labels[k]} has self-intersection {e2} >= 0: not divisorially contractible")
    keep = [i for i in range(S.n) if i != k]
    Q = tuple(tuple(S.Q[i][j] - S.Q[i][k] * S.Q[j][k] / e2 for j in keep) for i in keep)
    kdeg = tuple(_push(S.kdeg, S.Q, k))
    return NumericalSurface(tuple(S.labels[i] for i in keep), Q, kdeg, S.complete)


@dataclass(frozen=True)
class NumericalStep:
    kind: str  # "divisorial", "mori_fiber", "minimal_model"
    label: Optional[str] = None
    degree: Optional[Fraction] = None
    self_intersection: Optional[Fraction] = None
    base: Optional[str] = None  # "P1" or "point" on Mori fibre steps

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.label is not None:
            out["label"] = self.label
            out["degree"] = fmt(self.degree)
            out["self_intersection"] = fmt(self.self_intersection)
        if self.base is not None:
            out["base"] = self.base
            # no fan: the base is read off the numbers, not verified
            out["base_status"] = "assumed"
        return out


@dataclass(frozen=True)
class NumericalTrace:
    start: NumericalSurface
    steps: tuple[NumericalStep, ...]
    end: NumericalSurface
    status: str
    strategy: str

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.steps if s.kind != "minimal_model"]

    def to_json(self) -> dict:
        return {
            "strategy": self.strategy,
            "complete": self.start.complete,
            "steps": [s.to_json() for s in self.steps],
            "status": self.status,
            "end": self.end.to_json(),
        }


def numerical_options(S: NumericalSurface, delta: Sequence[Fraction]) -> list[Option]:
    rho = S.picard_rank
    out = []
    for k in range(S.n):
        d = S.kdeg[k] + delta[k]
        if d >= 0:
            continue
        c2 = S.Q[k][k]
        if rho == 1:
            out.append(Option("point", k, S.labels[k]))
        elif c2 < 0:
            out.append(Option("divisorial", k, S.labels[k]))
        elif c2 == 0 and rho == 2:
            out.append(Option("fibration", k, S.labels[k]))
    return out


def run_mmp_numerical(S: NumericalSurface, delta: Sequence, strategy="first-index") -> NumericalTrace:
    if len(delta) != S.n:
        raise NumericalError("bad_dimensions", f"boundary degrees have length {len(delta)}, expected {S.n}")
    if isinstance(strategy, str):
        strategy = Strategy.parse(strategy)
    strategy = strategy.fresh()
    current = S
    dvec = [q(x) for x in delta]
    steps = []
    while True:
        options = numerical_options(current, dvec)
        if not options:
            steps.append(NumericalStep("minimal_model"))
            status = "minimal_model"
            break
        o = strategy.choose(options)
        k = o.index
        deg = current.kdeg[k] + dvec[k]
        c2 = current.Q[k][k]
        if o.kind == "divisorial":
            steps.append(NumericalStep("divisorial", current.labels[k], deg, c2))
            dvec = _push(dvec, current.Q, k)
            current = contract_curve(current, k)
            continue
        base = "point" if o.kind == "point" else "P1"
        steps.append(NumericalStep("mori_fiber", current.labels[k], deg, c2, base))
        status = "mfs_point" if o.kind == "point" else "mfs_p1"
        break
    return NumericalTrace(S, tuple(steps), current, status, str(strategy))


def from_toric(pair: LogPair) -> tuple[NumericalSurface, list[Fraction]]:
    """(curve data, boundary degrees) of a toric pair; labels are ``x,y``."""
    X = pair.surface
    Q = intersection_matrix(X)
    kdeg = degrees(X, canonical_divisor(X))
    delta = degrees(X, pair.boundary + pair.general)
    labels = tuple(ray_label(r) for r in X.fan.rays)
    return NumericalSurface(labels, tuple(tuple(r) for r in Q), tuple(kdeg)), delta


# -- text format ----------------------------------------------------------------


def parse_surface(text: str) -> NumericalSurface:
    labels: list[str] = []
    ints: dict[tuple[int, int], Fraction] = {}
    kd: dict[int, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "curve" and len(parts) == 2:
                labels.append(parts[1])
            elif parts[0] == "int" and len(parts) == 4:
                i, j, v = int(parts[1]), int(parts[2]), Fraction(parts[3])
                for key in ((i, j), (j, i)):
                    if key in ints and ints[key] != v:
                        raise NumericalError("not_symmetric", f"line {lineno}: conflicting value for ({i},{j})")
                ints[(i, j)] = ints[(j, i)] = v
            elif parts[0] == "kdeg" and len(parts) == 3:
                kd[int(parts[1])] = Fraction(parts[2])
            else:
                raise NumericalError("parse_error", f"line {lineno}: cannot parse {line!r}")
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, NumericalError):
                raise
            raise NumericalError("parse_error", f"line {lineno}: {exc}") from None
    n = len(labels)
    for (i, j) in list(ints) + [(i, i) for i in kd]:
        if not (0 <= i < n and 0 <= j < n):
            raise NumericalError("bad_dimensions", f"curve index out of range in ({i},{j})")
    Q = tuple(tuple(ints.get((i, j), Fraction(0)) for j in range(n)) for i in range(n))
    return NumericalSurface(tuple(labels), Q, tuple(kd.get(i, Fraction(0)) for i in range(n)))


def format_surface(S: NumericalSurface) -> str:
    lines = [f"curve {lab}" for lab in S.labels]
    for i in range(S.n):
        for j in range(i, S.n):
            if S.Q[i][j] != 0:
                lines.append(f"int {i} {j} {fmt(S.Q[i][j])}")
    lines += [f"kdeg {i} {fmt(v)}" for i, v in enumerate(S.kdeg)]
    return "\n".join(lines) + "\n"

