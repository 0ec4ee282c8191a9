"""Conversion between user-facing numbers and exact rationals.

Everything inside the package is a :class:`fractions.Fraction`. Floats are
only accepted at the I/O boundary, where they are rounded to a fixed grid of
``1 / DENOMINATOR``.
"""
from __future__ import annotations

import numbers
from fractions import Fraction
from typing import Iterable, Sequence

DENOMINATOR = 10**6

Rational = Fraction
Vector = tuple[Fraction, ...]


def to_rational(value, denominator: int = DENOMINATOR) -> Fraction:
    """Convert ``value`` to a Fraction.

    Integers, Fractions and strings written as ``"p/q"`` are kept exact.
    Floats and decimal strings are rounded to the nearest multiple of
    ``1/denominator`` (decimal strings with at most six digits after the
    point are therefore exact).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty number")
        exact = Fraction(text)
        if "/" in text:
            return exact
        return _round(exact, denominator)
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, numbers.Real):
        x = float(value)
        if x != x or x in (float("inf"), float("-inf")):
            raise ValueError(f"not a finite number: {value!r}")
        return _round(Fraction(x), denominator)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def _round(x: Fraction, denominator: int) -> Fraction:
    if denominator % x.denominator == 0:
        return x
    return Fraction(round(x * denominator), denominator)


def to_vector(values: Iterable) -> Vector:
    return tuple(to_rational(v) for v in values)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), Fraction(0))


def fmt(x: Fraction) -> str:
    """Render a rational as ``p/q`` (or ``p`` when integral)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def fmt_decimal(x: Fraction, digits: int = 12) -> str:
    """Render a rational with ``digits`` significant digits."""
    return f"{float(x):.{digits}g}"


def is_probability(x: Fraction) -> bool:
    return 0 <= x <= 1
