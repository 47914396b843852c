"""The (K+Delta)-minimal model program on toric log surfaces.

A pair carries a torus-invariant boundary ``boundary`` with coefficients in
[0, 1] and an optional ``general`` part: a divisor class realized by general
members (an ample or big class moved off the torus-invariant curves). Only
the class of the general part matters, so any torus-invariant representative
may be used for it; degrees are always taken against K + boundary + general.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .lattice_fan import (
    Fan,
    FanError,
    FanMap,
    Vec,
    collapse,
    det,
    fibrations,
    normalize_form,
    pair as pair_value,
    project_fan,
    remove_ray,
)
from .rational import fmt
from .toric_surface import (
    ContractionMorphism,
    TDivisor,
    ToricSurface,
    canonical_divisor,
    degrees,
    is_ample,
    self_intersection,
)

DEGREE_BOUND = 3


class MMPError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class LogPair:
    surface: ToricSurface
    boundary: TDivisor
    general: Optional[TDivisor] = None

    def __post_init__(self):
        n = self.surface.n
        if len(self.boundary) != n:
            raise MMPError("bad_boundary", f"boundary has {len(self.boundary)} coefficients, fan has {n} rays")
        for c in self.boundary:
            if not 0 <= c <= 1:
                raise MMPError("bad_boundary", f"boundary coefficient {c} outside [0, 1]")
        if self.general is None:
            object.__setattr__(self, "general", TDivisor.zero(n))
        elif len(self.general) != n:
            raise MMPError("bad_boundary", "general part has the wrong length")

    @property
    def fan(self) -> Fan:
        return self.surface.fan

    @property
    def log_canonical(self) -> TDivisor:
        """K + boundary + general as a torus-invariant representative."""
        return canonical_divisor(self.surface) + self.boundary + self.general

    def degrees(self) -> list[Fraction]:
        return degrees(self.surface, self.log_canonical)

    def is_nef(self) -> bool:
        return all(d >= 0 for d in self.degrees())

    def contract(self, j: int) -> "LogPair":
        step = remove_ray(self.fan, j)
        return LogPair(ToricSurface(step.target), self.boundary.drop([j]), self.general.drop([j]))


# -- extremal rays -------------------------------------------------------------


def _divisorial_check(fan: Fan, j: int, selfint: Fraction) -> bool:
    prev, nxt = fan.neighbours(j)
    contractible = det(prev, nxt) > 0
    if (selfint < 0) != contractible:  # pragma: no cover - would be a bug
        raise AssertionError(f"C^2 = {selfint} disagrees with det test for ray {fan.rays[j]}")
    return contractible


def is_extremal(X: ToricSurface, j: int) -> bool:
    """Whether C_j spans an extremal ray of the cone of curves.

    Negative curves are always extremal; a curve of self-intersection zero
    is a full fibre and is extremal exactly when rho = 2; with rho = 1
    every curve spans the single ray.
    """
    if X.picard_rank == 1:
        return True
    c2 = self_intersection(X, j)
    if c2 < 0:
        return True
    return c2 == 0 and X.picard_rank == 2


def negative_extremal_rays(pair: LogPair) -> list[int]:
    degs = pair.degrees()
    return [j for j in range(pair.surface.n) if degs[j] < 0 and is_extremal(pair.surface, j)]


def fibration_of_ray(fan: Fan, j: int) -> tuple[int, int]:
    """The projection whose fibre is C_j, for a ray with opposite neighbours."""
    prev, nxt = fan.neighbours(j)
    if prev != -nxt:
        raise MMPError("not_fibre", f"curve of ray {fan.rays[j]} is not a fibre")
    return normalize_form((-prev.y, prev.x))


# -- steps and traces ----------------------------------------------------------


@dataclass(frozen=True)
class MMPStep:
    """One step of a run. ``kind`` is "divisorial", "mori_fiber" or
    "minimal_model"; ``label`` is the ray's index in the starting fan."""

    kind: str
    ray: Optional[Vec] = None
    label: Optional[int] = None
    degree: Optional[Fraction] = None
    self_intersection: Optional[Fraction] = None
    fanmap: Optional[FanMap] = None

    @property
    def within_degree_bound(self) -> Optional[bool]:
        if self.degree is None:
            return None
        return -self.degree <= DEGREE_BOUND

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.ray is not None:
            out["ray"] = [self.ray.x, self.ray.y]
            out["label"] = self.label
        if self.degree is not None:
            out["degree"] = fmt(self.degree)
            out["within_degree_bound"] = self.within_degree_bound
        if self.self_intersection is not None:
            out["self_intersection"] = fmt(self.self_intersection)
        if self.fanmap is not None:
            out["target"] = _target_json(self.fanmap)
        return out


def _target_json(fm: FanMap) -> dict:
    if fm.kind == "ray-removal":
        return {"kind": "surface", "rays": [[r.x, r.y] for r in fm.target.rays]}
    if fm.kind == "lattice-projection":
        return {"kind": "P1", "form": list(fm.form)}
    return {"kind": "point"}


STATUSES = ("minimal_model", "mfs_point", "mfs_p1")


@dataclass(frozen=True)
class MMPTrace:
    start: LogPair
    steps: tuple[MMPStep, ...]
    end: LogPair
    status: str
    strategy: str

    @property
    def divisorial_steps(self) -> tuple[MMPStep, ...]:
        return tuple(s for s in self.steps if s.kind == "divisorial")

    @property
    def removed(self) -> tuple[Vec, ...]:
        return tuple(s.ray for s in self.divisorial_steps)

    @property
    def terminal(self) -> MMPStep:
        return self.steps[-1]

    @property
    def labels(self) -> list[int]:
        return [s.label for s in self.steps if s.kind != "minimal_model"]

    @property
    def ray_labels(self) -> list[str]:
        """Contracted rays as ``x,y`` strings, the naming used by numerical runs."""
        return [ray_label(s.ray) for s in self.steps if s.kind != "minimal_model"]

    @property
    def base_key(self) -> Optional[tuple]:
        """("fib", form) or ("pt",) for Mori fibre spaces, else None."""
        if self.status == "mfs_p1":
            return ("fib", normalize_form(self.terminal.fanmap.form))
        if self.status == "mfs_point":
            return ("pt",)
        return None

    @property
    def composed(self) -> ContractionMorphism:
        maps = tuple(s.fanmap for s in self.steps if s.fanmap is not None)
        return ContractionMorphism(self.start.surface, maps)

    def to_json(self) -> dict:
        return {
            "strategy": self.strategy,
            "start_rays": [[r.x, r.y] for r in self.start.fan.rays],
            "boundary": self.start.boundary.to_json(),
            "steps": [s.to_json() for s in self.steps],
            "end_rays": [[r.x, r.y] for r in self.end.fan.rays],
            "status": self.status,
            "picard_ranks": _rank_sequence(self),
        }


def _rank_sequence(trace: MMPTrace) -> list[int]:
    rho = trace.start.surface.picard_rank
    out = [rho]
    for s in trace.divisorial_steps:
        rho -= 1
        out.append(rho)
    return out


# -- strategies ------------------------------------------------------------------


@dataclass(frozen=True)
class Option:
    """A negative extremal ray and what contracting it does."""

    kind: str  # "divisorial", "fibration", "point"
    index: int
    label: object


@dataclass
class Strategy:
    """Selection rule: ``first-index``, ``prefer-fibration``,
    ``prefer-ray:<label>`` or ``random:<seed>``."""

    rule: str
    target: Optional[str] = None
    seed: Optional[int] = None
    _rng: Optional[random.Random] = field(default=None, repr=False)

    @classmethod
    def parse(cls, text: str) -> "Strategy":
        text = text.strip()
        if text in ("first-index", "prefer-fibration"):
            return cls(text)
        if text.startswith("prefer-ray:"):
            target = text.split(":", 1)[1].replace(" ", "").strip("()")
            if not target:
                raise MMPError("bad_strategy", "prefer-ray needs a ray, e.g. prefer-ray:1,2")
            return cls("prefer-ray", target=target)
        if text.startswith("random:"):
            try:
                seed = int(text.split(":", 1)[1])
            except ValueError:
                raise MMPError("bad_strategy", f"bad seed in {text!r}") from None
            return cls("random", seed=seed)
        raise MMPError("bad_strategy", f"unknown strategy {text!r}")

    def __str__(self) -> str:
        if self.rule == "prefer-ray":
            return f"prefer-ray:{self.target}"
        if self.rule == "random":
            return f"random:{self.seed}"
        return self.rule

    def fresh(self) -> "Strategy":
        return Strategy(self.rule, self.target, self.seed)

    def choose(self, options: Sequence[Option]) -> Option:
        """Pick one option; the list is ordered by ray index."""
        if self.rule == "random":
            if self._rng is None:
                self._rng = random.Random(self.seed)
            return options[self._rng.randrange(len(options))]
        if self.rule == "prefer-ray":
            for o in options:
                if str(o.label) == self.target:
                    return o
        if self.rule == "prefer-fibration":
            for o in options:
                if o.kind == "fibration":
                    return o
        for o in options:
            if o.kind == "divisorial":
                return o
        return options[0]


def ray_label(r: Vec) -> str:
    return f"{r.x},{r.y}"


def mmp_options(pair: LogPair) -> list[Option]:
    X = pair.surface
    out = []
    for j in negative_extremal_rays(pair):
        if X.picard_rank == 1:
            kind = "point"
        elif _divisorial_check(X.fan, j, self_intersection(X, j)):
            kind = "divisorial"
        else:
            kind = "fibration"
        out.append(Option(kind, j, ray_label(X.fan.rays[j])))
    return out


def contract_divisorial(pair: LogPair, j: int, label: Optional[int] = None) -> tuple[LogPair, MMPStep]:
    X = pair.surface
    if j not in negative_extremal_rays(pair):
        raise MMPError("not_negative_extremal", f"ray {X.fan.rays[j]} is not (K+Delta)-negative extremal")
    c2 = self_intersection(X, j)
    if c2 >= 0:
        raise MMPError("not_divisorial", f"C^2 = {c2} >= 0: ray {X.fan.rays[j]} is a fibre, not divisorial")
    deg = pair.degrees()[j]
    try:
        fm = remove_ray(X.fan, j)
    except FanError as exc:
        raise MMPError(exc.code, str(exc)) from None
    new = LogPair(ToricSurface(fm.target), pair.boundary.drop([j]), pair.general.drop([j]))
    return new, MMPStep("divisorial", X.fan.rays[j], label, deg, c2, fm)


def detect_mori_fiber(pair: LogPair) -> Optional[tuple[FanMap, int]]:
    """A Mori fibre structure, or None: (fan map, index of a contracted curve).

    Projections are scanned in the order of :func:`fibrations` (first kernel
    ray), so the answer is deterministic when several exist.
    """
    X = pair.surface
    if X.picard_rank == 1:
        if is_ample(X, -pair.log_canonical):
            return collapse(X.fan), 0
        return None
    negative = set(negative_extremal_rays(pair))
    for form in fibrations(X.fan):
        for j, r in enumerate(X.fan.rays):
            if pair_value(form, r) != 0 and j in negative and self_intersection(X, j) == 0:
                return project_fan(X.fan, form), j
    return None


def run_mmp(pair: LogPair, strategy="first-index") -> MMPTrace:
    if isinstance(strategy, str):
        strategy = Strategy.parse(strategy)
    strategy = strategy.fresh()
    start_fan = pair.fan
    current = pair
    steps: list[MMPStep] = []
    while True:
        options = mmp_options(current)
        if not options:
            steps.append(MMPStep("minimal_model"))
            status = "minimal_model"
            break
        choice = strategy.choose(options)
        X = current.surface
        ray = X.fan.rays[choice.index]
        label = start_fan.index(ray)
        if choice.kind == "divisorial":
            rho = X.picard_rank
            current, step = contract_divisorial(current, choice.index, label)
            assert current.surface.picard_rank == rho - 1
            assert current.surface.is_q_factorial
            steps.append(step)
            continue
        deg = current.degrees()[choice.index]
        c2 = self_intersection(X, choice.index)
        if choice.kind == "point":
            fm = collapse(X.fan)
            status = "mfs_point"
        else:
            fm = project_fan(X.fan, fibration_of_ray(X.fan, choice.index))
            status = "mfs_p1"
        steps.append(MMPStep("mori_fiber", ray, label, deg, c2, fm))
        break
    return MMPTrace(pair, tuple(steps), current, status, str(strategy))
