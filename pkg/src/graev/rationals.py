"""Exact rational helpers.

All distances in the library are :class:`fractions.Fraction` values.  They are
serialized as ``"p/q"`` strings (or plain integers) and never as floats.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable

ZERO = Fraction(0)


def parse_rational(value) -> Fraction:
    """Parse ``"p/q"``, ``"n"``, an int or a Fraction.  Floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def common_scale(values: Iterable[Fraction]) -> int:
    """Least common denominator, so that ``v * scale`` is integral for all values."""
    scale = 1
    for v in values:
        scale = lcm(scale, Fraction(v).denominator)
    return scale
