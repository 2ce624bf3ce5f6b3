"""
Exact scalars. Every distance, coefficient and tolerance in the lab is a
``fractions.Fraction``; floats never enter.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, List, Union

from bvslab.errors import InvalidScalar

Scalar = Fraction
ScalarLike = Union[Fraction, int, str]

_RATIONAL = re.compile(r"^\s*([+-]?)\s*(\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_scalar(text: ScalarLike) -> Fraction:
    """
    Parse an integer or ``p/q`` literal into an exact scalar.

    Decimal and exponent notations are refused so that no rounding can sneak in.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise InvalidScalar(str(text))
    if isinstance(text, int):
        return Fraction(text)
    match = _RATIONAL.match(str(text).replace("−", "-"))
    if match is None:
        raise InvalidScalar(str(text))
    sign, numerator, denominator = match.groups()
    if denominator is not None and int(denominator) == 0:
        raise InvalidScalar(str(text))
    value = Fraction(int(numerator), int(denominator or 1))
    return -value if sign == "-" else value


def parse_scalar_list(text: str) -> List[Fraction]:
    return [parse_scalar(part) for part in text.split(",") if part.strip()]


def format_scalar(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_scalars(values: Iterable[Fraction]) -> str:
    return ", ".join(format_scalar(value) for value in values)
