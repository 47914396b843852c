"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the package's own geometry: cone
membership is decided by brute-force Caratheodory subsets, resolutions by
lattice-point hulls, and self-intersections by the neighbour formula.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from pathlib import Path

from sarkisov2d.lattice_fan import FanError, make_primitive, validate_fan
from sarkisov2d.mmp import LogPair, run_mmp
from sarkisov2d.sarkisov import decompose_sarkisov, parse_scenario
from sarkisov2d.toric_surface import TDivisor, ToricSurface

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"
NS = (2, 3, 4, 5)


def example_rays(example: int, n: int) -> list[tuple[int, int]]:
    return {
        1: [(1, 0), (1, n), (-1, 0), (-1, -n)],
        2: [(1, 0), (1, n), (0, 1), (-1, -1)],
        3: [(1, 0), (1, n), (0, 1), (-1, -n)],
    }[example]


def load(name: str, swap: bool = False):
    text = (SCENARIOS / name).read_text()
    sc = parse_scenario(text, str(SCENARIOS))
    return sc.swapped() if swap else sc


def run_scenario(name: str, swap: bool = False, seed: int = 0):
    sc = load(name, swap)
    ra, rb = sc.runs()
    return decompose_sarkisov(sc.surface, sc.boundary, ra, rb, seed)


def random_fan(rng: random.Random, lo: int, hi: int, bound: int = 4):
    n = rng.randint(lo, hi)
    while True:
        pts = set()
        while len(pts) < n:
            v = (rng.randint(-bound, bound), rng.randint(-bound, bound))
            if v != (0, 0):
                pts.add(make_primitive(v))
        try:
            return validate_fan(sorted(pts))
        except FanError:
            continue


def random_boundary(rng: random.Random, n: int, denom: int = 6) -> TDivisor:
    return TDivisor.of([Fraction(rng.randint(0, denom), denom) for _ in range(n)])


def random_pair(rng: random.Random, lo: int = 4, hi: int = 8) -> LogPair:
    fan = random_fan(rng, lo, hi)
    return LogPair(ToricSurface(fan), random_boundary(rng, fan.n))


def mfs_runs(pair: LogPair, tries: int = 8):
    """Two runs ending in Mori fibre spaces with different strategies, if any."""
    runs = [run_mmp(pair, s) for s in ("first-index", "prefer-fibration")]
    runs += [run_mmp(pair, f"random:{k}") for k in range(tries)]
    mf = [r for r in runs if r.status != "minimal_model"]
    return (mf[0], mf[-1]) if len(mf) >= 2 else None


# -- oracles ---------------------------------------------------------------------


def det(a, b) -> int:
    return a[0] * b[1] - a[1] * b[0]


def selfint_formula(rays, j) -> Fraction:
    """D_j^2 = -det(v_-, v_+) / (det(v_-, v_j) det(v_j, v_+))."""
    n = len(rays)
    a, v, b = rays[j - 1], rays[j], rays[(j + 1) % n]
    return Fraction(-det(a, b), det(a, v) * det(v, b))


def adjacent_formula(rays, j) -> Fraction:
    """D_j . D_{j+1} = 1 / det(v_j, v_{j+1})."""
    n = len(rays)
    return Fraction(1, det(rays[j], rays[(j + 1) % n]))


def _solve(columns, target):
    """Exact solution x of sum x_i columns[i] = target, or None."""
    m, k = len(target), len(columns)
    rows = [[Fraction(columns[c][r]) for c in range(k)] + [Fraction(target[r])] for r in range(m)]
    piv = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    if any(rows[i][k] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * k
    for i, c in enumerate(piv):
        x[c] = rows[i][k] / rows[i][c]
    return x


def _rank(vectors) -> int:
    from sarkisov2d.numerical_surface import rank

    return rank([[Fraction(x) for x in v] for v in vectors]) if vectors else 0


def in_cone(c, gens) -> bool:
    """Caratheodory: c is a nonnegative combination of some independent subset."""
    if all(x == 0 for x in c):
        return True
    dim = _rank(gens)
    for size in range(1, dim + 1):
        for sub in itertools.combinations(gens, size):
            if _rank(sub) != size:
                continue
            x = _solve(sub, c)
            if x is not None and all(v >= 0 for v in x):
                return True
    return False


def proportional_positive(a, b) -> bool:
    if _rank([a, b]) > 1:
        return False
    return sum(x * y for x, y in zip(a, b)) > 0


def extremal_oracle(classes, j) -> bool:
    """C_j spans an extremal ray of the (pointed) cone generated by ``classes``
    iff it is not in the cone of the generators not positively proportional to it."""
    c = classes[j]
    others = [v for v in classes if not proportional_positive(v, c)]
    return not in_cone(c, others)


def hull_resolution(a, b) -> list[tuple[int, int]]:
    """Lattice points on the compact boundary of the hull of the nonzero
    lattice points of cone(a, b), from a to b (inclusive)."""
    m = det(a, b)
    xs, ys = [0, a[0], b[0], a[0] + b[0]], [0, a[1], b[1], a[1] + b[1]]
    pts = []
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            if (x, y) == (0, 0):
                continue
            al, be = det((x, y), b), det(a, (x, y))
            if 0 <= al <= m and 0 <= be <= m:
                pts.append((x, y))
    chain = [a]
    cur = a
    while cur != b:
        ahead = [p for p in pts if det(cur, p) > 0]
        # the next boundary point leaves every other candidate on the far side
        # (away from the origin) of the line cur -> q; the nearest such wins
        best = None
        for q in ahead:
            d = (q[0] - cur[0], q[1] - cur[1])
            if all(det(d, (p[0] - cur[0], p[1] - cur[1])) <= 0 for p in ahead):
                if best is None or _dist2(q, cur) < _dist2(best, cur):
                    best = q
        chain.append(best)
        cur = best
    return chain


def _dist2(q, cur) -> int:
    return (q[0] - cur[0]) ** 2 + (q[1] - cur[1]) ** 2
