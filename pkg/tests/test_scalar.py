from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bvslab.errors import InvalidScalar
from bvslab.scalar import format_scalar, format_scalars, parse_scalar, parse_scalar_list


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1/2", Fraction(1, 2)),
        ("-3", Fraction(-3)),
        (" 4 / 6 ", Fraction(2, 3)),
        ("−1/4", Fraction(-1, 4)),
        (7, Fraction(7)),
        (Fraction(5, 3), Fraction(5, 3)),
    ],
)
def test_parse_scalar_accepts_exact_literals(text, expected):
    assert parse_scalar(text) == expected


@pytest.mark.parametrize("text", ["0.5", "1e3", "1/0", "", "half", "1/2/3", True])
def test_parse_scalar_refuses_inexact_or_malformed_input(text):
    with pytest.raises(InvalidScalar):
        parse_scalar(text)


def test_format_scalar_drops_unit_denominators():
    assert format_scalar(Fraction(4, 2)) == "2"
    assert format_scalar(Fraction(-1, 2)) == "-1/2"
    assert format_scalars([Fraction(1), Fraction(1, 3)]) == "1, 1/3"


def test_parse_scalar_list_skips_empty_parts():
    assert parse_scalar_list("1, 1/2,") == [Fraction(1), Fraction(1, 2)]


@given(st.fractions())
def test_formatted_scalars_parse_back_exactly(value):
    assert parse_scalar(format_scalar(value)) == value
