from __future__ import annotations

import random
from fractions import Fraction

import pytest

from helpers import SCENARIOS, example_rays, random_pair
from sarkisov2d.lattice_fan import validate_fan
from sarkisov2d.mmp import LogPair, run_mmp
from sarkisov2d.numerical_surface import (
    NumericalError,
    NumericalSurface,
    contract_curve,
    format_surface,
    from_toric,
    parse_surface,
    rank,
    run_mmp_numerical,
)
from sarkisov2d.toric_surface import TDivisor, ToricSurface


def f1_surface():
    return parse_surface((SCENARIOS / "f1.surf").read_text())


def test_rank():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[Fraction(1, 2), 0], [0, 3]]) == 2
    assert rank([[0, 0], [0, 0]]) == 0


def test_f1_file_roundtrip():
    S = f1_surface()
    assert S.labels == ("1,0", "1,1", "0,1", "-1,-1")
    assert S.picard_rank == 2
    assert parse_surface(format_surface(S)) == S


def test_f1_numerical_runs():
    S = f1_surface()
    zero = [0] * S.n
    t = run_mmp_numerical(S, zero)
    # on P2 every line is a point option; first-index takes the first one
    assert t.labels == ["1,1", "1,0"]
    assert t.status == "mfs_point"
    assert t.end.picard_rank == 1
    assert t.to_json()["steps"][-1]["base_status"] == "assumed"
    t = run_mmp_numerical(S, zero, "prefer-fibration")
    assert t.status == "mfs_p1"
    assert t.labels == ["1,0"]


def test_contraction_formula():
    S = f1_surface()
    P2 = contract_curve(S, 1)
    # contracting the (-1)-curve leaves three lines on P2
    assert all(P2.Q[i][j] == 1 for i in range(3) for j in range(3))
    assert P2.kdeg == (-3, -3, -3)
    with pytest.raises(NumericalError) as exc:
        contract_curve(S, 0)
    assert exc.value.code == "not_divisorial"


@pytest.mark.parametrize(
    "text, code",
    [
        ("curve a\ncurve a\n", "duplicate_label"),
        ("curve a\ncurve b\nint 0 1 1\nint 1 0 2\n", "not_symmetric"),
        ("curve a\nint 0 3 1\n", "bad_dimensions"),
        ("curve a\nwhat 1\n", "parse_error"),
        ("curve a\nkdeg 0 x\n", "parse_error"),
    ],
)
def test_parse_errors(text, code):
    with pytest.raises(NumericalError) as exc:
        parse_surface(text)
    assert exc.value.code == code


def test_unknown_curve_and_dimensions():
    S = f1_surface()
    with pytest.raises(NumericalError) as exc:
        S.index("9,9")
    assert exc.value.code == "unknown_curve"
    with pytest.raises(NumericalError) as exc:
        run_mmp_numerical(S, [0, 0])
    assert exc.value.code == "bad_dimensions"
    with pytest.raises(NumericalError):
        NumericalSurface(("a",), ((1, 2),), (0,))


@pytest.mark.parametrize("example", (1, 2, 3))
def test_examples_cross_validate(example):
    X = ToricSurface(validate_fan(example_rays(example, 3)))
    pair = LogPair(X, TDivisor.zero(4))
    S, delta = from_toric(pair)
    for strategy in ("first-index", "prefer-fibration", "prefer-ray:1,3", "random:4"):
        a, b = run_mmp(pair, strategy), run_mmp_numerical(S, delta, strategy)
        assert a.ray_labels == b.labels
        assert a.status == b.status


def test_random_cross_validation():
    rng = random.Random(3)
    for _ in range(30):
        pair = random_pair(rng, 4, 8)
        S, delta = from_toric(pair)
        assert S.picard_rank == pair.surface.picard_rank
        for strategy in ("first-index", "random:7"):
            a, b = run_mmp(pair, strategy), run_mmp_numerical(S, delta, strategy)
            assert (a.ray_labels, a.status) == (b.labels, b.status)
