from fractions import Fraction

import pytest

from bvslab.dsl import build_carrier, parse_carrier
from bvslab.errors import (
    AsymmetricTable,
    EmptySelector,
    ImageOutsideCarrier,
    LazyAxiomViolation,
    MalformedTable,
    NegativeDistance,
    NonzeroDiagonal,
    PointNotInCarrier,
    UnknownSelector,
    ZeroOffDiagonal,
)
from bvslab.space import (
    GeneratedSpace,
    IndexRange,
    Interval,
    PointList,
    SelfMap,
    make_finite_space,
    numeric_point,
    parse_selector,
    sample_of,
    select_points,
    truncate,
)
from conftest import F


def test_asymmetric_table_reports_the_first_cell():
    with pytest.raises(AsymmetricTable) as error:
        make_finite_space(["a", "b"], [[0, 1], [2, 0]])
    assert (error.value.i, error.value.j) == (0, 1)


@pytest.mark.parametrize(
    "table, error",
    [
        ([[1, 1], [1, 0]], NonzeroDiagonal),
        ([[0, -1], [-1, 0]], NegativeDistance),
        ([[0, 0], [0, 0]], ZeroOffDiagonal),
        ([[0, 1]], MalformedTable),
        ([[0, 1, 1], [1, 0, 1]], MalformedTable),
    ],
)
def test_malformed_tables_are_rejected(table, error):
    with pytest.raises(error):
        make_finite_space(["a", "b"], table)


def test_cells_are_scanned_row_by_row():
    # Row 1 holds a zero off the diagonal before row 2 reaches its bad diagonal.
    with pytest.raises(ZeroOffDiagonal) as error:
        make_finite_space(["a", "b", "c"], [[0, 2, 1], [2, 0, 0], [1, 0, 1]])
    assert (error.value.i, error.value.j) == (1, 2)


def test_duplicate_labels_are_rejected():
    with pytest.raises(MalformedTable):
        make_finite_space(["a", "a"], [[0, 1], [1, 0]])


def test_a_single_point_is_a_valid_space():
    space = make_finite_space(["only"], [[0]])
    assert len(space) == 1
    assert space.distance(space.point("only"), space.point("only")) == 0


def test_table_cells_accept_rational_text(equilateral):
    space = make_finite_space(["a", "b"], [["0", "1/2"], ["1/2", "0"]])
    assert space.distance(space.point("a"), space.point("b")) == F(1, 2)
    assert equilateral.labels == ["a", "b", "c"]


def test_interval_membership_respects_open_ends():
    half_open = Interval(F(0), F(1), low_closed=False, high_closed=True)
    assert not half_open.contains(numeric_point(0))
    assert half_open.contains(numeric_point(1))
    assert Interval(F(0)).contains(numeric_point(10 ** 6))
    assert half_open.describe() == "(0, 1]"


def test_indexed_family_locates_values():
    family = build_carrier(parse_carrier("{1/n : n >= 2}"))
    assert family.point_at(3) == numeric_point(F(1, 3), 3)
    assert family.point_for_value(F(1, 5)).index == 5
    assert family.point_for_value(F(2, 5)) is None
    assert family.point_for_value(F(1)) is None
    with pytest.raises(UnknownSelector):
        family.point_at(1)


def test_union_carrier_takes_the_first_matching_part():
    carrier = build_carrier(parse_carrier("{0} union {2^n : n >= 1} union {3^n : n >= 1}"))
    assert carrier.point_for_value(F(0)).index is None
    assert carrier.point_for_value(F(8)).index == 3
    assert carrier.point_for_value(F(9)).index == 2
    assert carrier.point_for_value(F(5)) is None
    with pytest.raises(UnknownSelector):
        carrier.point_at(2)


def test_generated_distances_match_the_rules(e2, e4, e6):
    space, _ = e2
    assert space.distance(space.point_for_value(F(1, 2)), space.point_for_value(F(1, 3))) == F(1, 2)
    assert space.distance(space.point_for_value(F(1, 2)), space.point_for_value(F(1, 5))) == 3
    space, _ = e4
    assert space.distance(numeric_point(1), numeric_point(2)) == 13
    assert space.distance(numeric_point(3), numeric_point(0)) == 6
    space, _ = e6
    assert space.distance(space.point_for_value(2), space.point_for_value(3)) == F(5, 6)
    assert space.distance(space.point_for_value(2), space.point_for_value(4)) == 1


def test_points_outside_the_carrier_are_refused(e9):
    space, _ = e9
    with pytest.raises(PointNotInCarrier):
        space.distance(numeric_point(0), numeric_point(6))
    with pytest.raises(PointNotInCarrier):
        space.point_for_value(F(-1))


def test_lazy_checks_catch_an_asymmetric_rule():
    space = GeneratedSpace(
        name="skew",
        carrier=Interval(F(0), F(1), high_closed=True),
        rule=lambda p, q: p.value - q.value if p != q else F(0),
    )
    with pytest.raises(LazyAxiomViolation):
        space.distance(numeric_point(0), numeric_point(1))


def test_truncation_names_and_tabulates_the_selection(e2, e8):
    space, _ = e2
    finite = truncate(space, IndexRange(2, 4))
    assert finite.name == "e2@2..4"
    assert finite.labels == ["1/2", "1/3", "1/4"]
    assert finite.distance(finite.point("1/2"), finite.point("1/4")) == 2
    space, _ = e8
    finite = truncate(space, PointList((F(0), F(1, 2), F(1))))
    assert finite.distance(finite.point("1/2"), finite.point("1")) == 4
    assert finite.distance(finite.point("0"), finite.point("1")) == 1


def test_selectors_parse_ranges_and_lists():
    assert parse_selector("2..9") == IndexRange(2, 9)
    assert parse_selector("{0, 1/4}") == PointList((F(0), F(1, 4)))
    assert str(IndexRange(2, 9)) == "2..9"


def test_selecting_nothing_is_an_error(equilateral, e2):
    with pytest.raises(EmptySelector):
        select_points(equilateral, IndexRange(0, 3))
    with pytest.raises(PointNotInCarrier):
        select_points(e2[0], PointList((F(2, 5),)))
    with pytest.raises(EmptySelector):
        sample_of(equilateral, [])


def test_default_sample_comes_from_the_space(e4, equilateral):
    space, _ = e4
    assert [point.label for point in sample_of(space)] == ["0", "1/4", "1/2", "3/4", "1", "2", "5"]
    assert len(sample_of(equilateral)) == 3


def test_maps_resolve_images_in_the_carrier(e2, e4):
    space, selfmap = e2
    assert selfmap.apply(space.point_for_value(F(1, 2))) == space.point_for_value(F(1, 4))
    assert selfmap(space.point_for_value(F(1, 5))) == space.point_for_value(F(1, 2))
    space, selfmap = e4
    assert selfmap.apply(numeric_point(1)) == numeric_point(F(1, 2))
    assert selfmap.apply(numeric_point(F(3, 4))) == numeric_point(0)


def test_images_outside_the_carrier_are_refused():
    carrier = Interval(F(0), F(5), high_closed=True)
    shift = SelfMap.from_values("shift", carrier, lambda point: point.value + 10)
    with pytest.raises(ImageOutsideCarrier):
        shift.apply(numeric_point(1))


def test_table_maps_refuse_unlisted_points(equilateral):
    a, b, c = equilateral.points
    swap = SelfMap.from_table("swap", {a: b, b: a})
    assert swap.apply(a) == b
    with pytest.raises(PointNotInCarrier):
        swap.apply(c)
    assert SelfMap.identity().apply(c) == c
    assert SelfMap.constant(a).apply(c) == a
