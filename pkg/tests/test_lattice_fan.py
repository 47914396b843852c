from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import NS, det, example_rays, hull_resolution, random_fan
from sarkisov2d.lattice_fan import (
    FanError,
    P1Fan,
    Vec,
    apply,
    fan_isomorphic,
    fibration_ok,
    fibrations,
    format_fan,
    kernel_weights,
    make_primitive,
    parse_fan,
    project_fan,
    remove_ray,
    remove_rays,
    subdivide_to_smooth,
    validate_fan,
)

P1xP1 = [(1, 0), (0, 1), (-1, 0), (0, -1)]
P2 = [(1, 0), (0, 1), (-1, -1)]


@pytest.mark.parametrize("n", NS)
def test_example1_multiplicities(n):
    fan = validate_fan(example_rays(1, n))
    assert fan.n == 4
    assert fan.multiplicities == [n] * 4


def test_input_order_does_not_matter():
    a = validate_fan([(1, 0), (-1, -2), (1, 2), (-1, 0)])
    b = validate_fan(example_rays(1, 2))
    assert set(a.rays) == set(b.rays)
    for i in range(a.n):
        assert det(a.rays[i], a.rays[(i + 1) % a.n]) > 0


@pytest.mark.parametrize(
    "rays, code",
    [
        ([(1, 0), (0, 1), (1, 0), (-1, -1)], "duplicate_ray"),
        ([(1, 0), (0, 1), (2, 0), (-1, -1)], "duplicate_ray"),
        ([(1, 0), (0, 1)], "too_few_rays"),
        ([(1, 0), (0, 1), (-1, 0)], "not_complete"),
        ([(1, 0), (1, 1), (0, 1)], "not_complete"),
        ([(0, 0), (1, 0), (-1, -1)], "zero_vector"),
    ],
)
def test_validate_errors(rays, code):
    with pytest.raises(FanError) as exc:
        validate_fan(rays)
    assert exc.value.code == code


def test_make_primitive():
    assert make_primitive((4, -6)) == Vec(2, -3)
    assert make_primitive((0, -5)) == Vec(0, -1)


def test_parse_format_roundtrip():
    fan = validate_fan(example_rays(3, 4))
    assert parse_fan(format_fan(fan, "example 3")) == fan
    with pytest.raises(FanError) as exc:
        parse_fan("ray 1 0\nray one 1\n")
    assert exc.value.code == "parse_error"


def test_weighted_plane_resolution_inserts_one_ray():
    # the cone of multiplicity n in P(1,1,n) is a 1/n(1,1) point: a single -n curve
    for n in NS:
        fan = validate_fan([(1, 0), (0, 1), (-1, -n)])
        smooth, inserted = subdivide_to_smooth(fan)
        assert [smooth.rays[i] for i in inserted] == [Vec(0, -1)]


def _check_resolution(fan):
    smooth, inserted = subdivide_to_smooth(fan)
    assert set(fan.rays) <= set(smooth.rays)
    assert smooth.is_smooth
    # every original cone is refined exactly by the hull boundary points
    for i in range(fan.n):
        a, b = fan.rays[i], fan.rays[(i + 1) % fan.n]
        ia, ib = smooth.index(a), smooth.index(b)
        chain = [smooth.rays[k % smooth.n] for k in range(ia, ia + (ib - ia) % smooth.n + 1)]
        assert chain == [Vec(*p) for p in hull_resolution(a, b)]
    # minimality: inserted curves are never (-1)-curves
    for k in inserted:
        prev, w, nxt = smooth.rays[k - 1], smooth.rays[k], smooth.rays[(k + 1) % smooth.n]
        s = (prev.x + nxt.x, prev.y + nxt.y)
        b = s[0] // w.x if w.x else s[1] // w.y
        assert (b * w.x, b * w.y) == s and b >= 2


@pytest.mark.parametrize("n", NS)
@pytest.mark.parametrize("example", (1, 2, 3))
def test_resolution_examples(example, n):
    _check_resolution(validate_fan(example_rays(example, n)))


def test_resolution_random():
    rng = random.Random(11)
    for _ in range(60):
        _check_resolution(random_fan(rng, 3, 9, bound=6))


@pytest.mark.parametrize("n", NS)
def test_example2_contractions(n):
    fan = validate_fan(example_rays(2, n))
    to_p2 = remove_ray(fan, fan.index((1, n)))
    assert fan_isomorphic(to_p2.target, validate_fan(P2)) is not None
    to_weighted = remove_ray(fan, fan.index((0, 1)))
    assert kernel_weights(to_weighted.target) == tuple(sorted((1, n - 1, n)))
    assert to_weighted.relative_picard == 1


def test_remove_ray_not_contractible():
    fan = validate_fan(P1xP1)
    with pytest.raises(FanError) as exc:
        remove_ray(fan, 0)
    assert exc.value.code == "not_contractible"
    with pytest.raises(FanError):
        remove_ray(validate_fan(P2), 0)


def test_remove_rays_order_independent():
    fan = validate_fan([(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (0, -1)])
    # (1,1) and (-1,1) are disjoint (-1)-curves: either order gives P1xP1
    target = remove_rays(fan, [(-1, 1), (1, 1)])[-1].target
    assert set(target.rays) == set(map(Vec._make, P1xP1))


@pytest.mark.parametrize("n", NS)
def test_example1_fibrations(n):
    fan = validate_fan(example_rays(1, n))
    forms = fibrations(fan)
    assert forms[0] == (0, 1)
    assert set(forms) == {(0, 1), (n, -1)}
    for f in forms:
        fm = project_fan(fan, f)
        assert isinstance(fm.target, P1Fan)
        assert fm.relative_picard == 1
    assert not fibration_ok(fan, (1, 0))
    with pytest.raises(FanError) as exc:
        project_fan(fan, (1, 0))
    assert exc.value.code == "not_fibration"


@pytest.mark.parametrize("n", NS)
def test_example1_not_p1xp1(n):
    assert fan_isomorphic(validate_fan(example_rays(1, n)), validate_fan(P1xP1)) is None


def test_example1_n1_would_be_p1xp1():
    # sanity of the isomorphism test itself: n = 1 is a reparametrised P1xP1
    fan = validate_fan([(1, 0), (1, 1), (-1, 0), (-1, -1)])
    m = fan_isomorphic(fan, validate_fan(P1xP1))
    assert m is not None
    assert {apply(m, v) for v in fan.rays} == set(map(Vec._make, P1xP1))


unimodular = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)).filter(
    lambda m: abs(m[0] * m[3] - m[1] * m[2]) == 1
)


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 10**6), m=unimodular)
def test_unimodular_invariance(seed, m):
    fan = random_fan(random.Random(seed), 3, 8)
    M = ((m[0], m[1]), (m[2], m[3]))
    image = validate_fan([apply(M, r) for r in fan.rays])
    assert sorted(image.multiplicities) == sorted(fan.multiplicities)
    assert image.is_smooth == fan.is_smooth
    iso = fan_isomorphic(fan, image)
    assert iso is not None
    assert {apply(iso, r) for r in fan.rays} == set(image.rays)
    assert len(fibrations(image)) == len(fibrations(fan))


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 10**6), v=st.tuples(st.integers(-9, 9), st.integers(-9, 9)))
def test_random_fans_are_complete(seed, v):
    fan = random_fan(random.Random(seed), 3, 10)
    # consecutive rays turn by less than pi and the turns add up to one full circle
    turns = 0.0
    for c in fan.cones:
        a, b = fan.rays[c.head], fan.rays[c.tail]
        assert c.multiplicity == det(a, b) > 0
        turns += math.atan2(det(a, b), a.x * b.x + a.y * b.y)
    assert abs(turns - 2 * math.pi) < 1e-9
    if v != (0, 0):
        i = fan.cone_containing(v)
        a, b = fan.rays[i], fan.rays[(i + 1) % fan.n]
        assert det(a, v) >= 0 and det(v, b) >= 0
