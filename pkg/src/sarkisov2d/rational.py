"""Exact rational parsing and canonical ``p/q`` rendering."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Q = Fraction
Number = Union[int, Fraction, str]


def q(x: Number) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def qvec(xs: Iterable[Number]) -> tuple[Fraction, ...]:
    return tuple(q(x) for x in xs)


def fmt(x: Fraction) -> str:
    """Canonical ``p/q`` string (q > 0, gcd 1); integers render as ``p/1``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def fmt_vec(xs: Iterable[Fraction]) -> list[str]:
    return [fmt(x) for x in xs]
