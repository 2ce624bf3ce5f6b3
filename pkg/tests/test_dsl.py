import logging

import pytest

from bvslab.dsl import (
    MAP_VARIABLES,
    SPACE_VARIABLES,
    And,
    BinOp,
    Compare,
    Not,
    Num,
    Or,
    Predicate,
    Var,
    build_space,
    eval_distance,
    eval_map_value,
    evaluate_condition,
    evaluate_expression,
    format_map_spec,
    format_space_spec,
    lint_overlaps,
    parse_expression,
    parse_map_spec,
    parse_space_spec,
)
from bvslab.errors import (
    DivisionByZeroInRule,
    DslEvaluationError,
    DslSyntaxError,
    NoClauseMatches,
    SpaceError,
)
from bvslab.space import IndexRange, PointList, numeric_point, sample_of
from conftest import F, read_corpus


def diagnostics_of(source, parse=parse_space_spec):
    with pytest.raises(DslSyntaxError) as error:
        parse(source)
    return [(d.line, d.column, d.message) for d in error.value.diagnostics]


def value_of(text, **env):
    return evaluate_expression(parse_expression(text, SPACE_VARIABLES), {k: F(v) for k, v in env.items()})


def test_space_headers_are_read():
    spec = parse_space_spec(read_corpus("e2.space"))
    assert spec.name == "e2"
    assert (spec.claimed_v, spec.claimed_s) == (3, F(3))
    assert spec.completeness_note == "complete, not sequentially compact"
    assert spec.sample == IndexRange(2, 9)
    assert len(spec.clauses) == 2


def test_map_headers_are_read():
    spec = parse_map_spec(read_corpus("e9.map"))
    assert spec.name == "e9-map"
    assert len(spec.clauses) == 2


@pytest.mark.parametrize("name", ["e2", "e4", "e6", "e8", "e9"])
def test_printed_specs_parse_to_the_same_tree(name):
    space = parse_space_spec(read_corpus(f"{name}.space"))
    assert parse_space_spec(format_space_spec(space)) == space
    selfmap = parse_map_spec(read_corpus(f"{name}.map"))
    assert parse_map_spec(format_map_spec(selfmap)) == selfmap


def test_sample_lists_survive_printing():
    spec = parse_space_spec(read_corpus("e4.space"))
    assert spec.sample == PointList((F(0), F(1, 4), F(1, 2), F(3, 4), F(1), F(2), F(5)))
    assert "sample: 0, 1/4, 1/2, 3/4, 1, 2, 5" in format_space_spec(spec)


def test_arithmetic_precedence():
    assert value_of("2^3^2") == 512
    assert value_of("-2^2") == -4
    assert value_of("1 + 2*3 - 4/8") == F(13, 2)
    assert value_of("2x + 3(y - 1)", x=1, y=2) == 5
    assert value_of("abs(x - y)", x=1, y=4) == 3
    assert value_of("2^(0 - 1)") == F(1, 2)


def test_implicit_multiplication_builds_a_product():
    assert parse_expression("2x", SPACE_VARIABLES) == BinOp("*", Num(2), Var("x"))


def test_condition_precedence_is_not_then_and_then_or():
    spec = parse_map_spec("not x = 0 and x < 2 or x = 5 => 1")
    condition = spec.clauses[0].condition
    assert isinstance(condition, Or)
    assert isinstance(condition.left, And)
    assert isinstance(condition.left.left, Not)
    assert condition.right == Compare("=", Var("x"), Num(5))


def test_parenthesised_conditions_and_expressions_both_parse():
    spec = parse_map_spec("(x = 0 or x = 1) and (x + 1) > 1 => 1")
    condition = spec.clauses[0].condition
    assert isinstance(condition, And)
    assert isinstance(condition.left, Or)
    assert condition.right == Compare(">", BinOp("+", Var("x"), Num(1)), Num(1))


def test_unicode_operators_match_ascii():
    assert parse_map_spec("x ≥ 0 and x ≠ 1 => 2×x − 1") == parse_map_spec("x >= 0 and x != 1 => 2*x - 1")


def test_semicolons_separate_clauses():
    assert len(parse_map_spec("x = 0 => 1; otherwise => 2").clauses) == 2


def test_predicates():
    env = {"x": F(1, 2)}
    assert not evaluate_condition(Predicate("even", (Var("x"),)), env)
    assert not evaluate_condition(Predicate("odd", (Var("x"),)), env)
    assert evaluate_condition(Predicate("even", (Num(0),)), {})
    assert evaluate_condition(Predicate("power", (Num(3), Num(27))), {})
    assert not evaluate_condition(Predicate("power", (Num(2), Num(1))), {})
    assert not evaluate_condition(Predicate("power", (Num(2), Num(12))), {})


def test_dangling_arrow_is_reported_at_the_arrow():
    assert diagnostics_of("x = y =>") == [(1, 7, "expected an expression after '=>'")]


def test_decimals_are_refused():
    assert diagnostics_of("x = 0.5 => 1") == [(1, 6, "decimal literals are not allowed; write p/q")]


def test_literal_division_by_zero_is_refused():
    assert diagnostics_of("x / 0 = 1 => 1") == [(1, 3, "division by zero in literal")]


def test_unknown_variables_name_the_allowed_ones():
    [(line, column, message)] = diagnostics_of("z = 1 => 1")
    assert (line, column) == (1, 1)
    assert message == "unknown variable 'z' (allowed: m, n, x, y)"
    [(_, _, message)] = diagnostics_of("y = 1 => 1", parse_map_spec)
    assert message == "unknown variable 'y' (allowed: n, x)"


def test_every_broken_line_is_reported():
    found = diagnostics_of("x = y => 0\nx > => 1\nx = 0.5 => 2")
    assert [line for line, _, _ in found] == [2, 3]


def test_empty_source_has_no_clauses():
    assert diagnostics_of("# nothing here\n") == [(1, 1, "no clauses")]


def test_otherwise_must_come_last():
    assert diagnostics_of("otherwise => 1\nx = 0 => 2") == [(1, 1, "'otherwise' must be the last clause")]


def test_map_files_refuse_space_headers():
    [(line, _, message)] = diagnostics_of("carrier: [0, 1]\notherwise => x", parse_map_spec)
    assert line == 1
    assert message == "'carrier:' is not allowed in a map file"


def test_distances_use_values_and_indices(e2):
    space, _ = e2
    spec = parse_space_spec(read_corpus("e2.space"))
    half, quarter = space.point_for_value(F(1, 2)), space.point_for_value(F(1, 4))
    assert eval_distance(spec, half, quarter) == 2
    with pytest.raises(DslEvaluationError):
        eval_distance(spec, numeric_point(F(1, 2)), numeric_point(F(1, 4)))


def test_evaluation_errors_name_the_point():
    with pytest.raises(DivisionByZeroInRule) as error:
        eval_map_value(parse_map_spec("otherwise => 1/x"), numeric_point(0))
    assert error.value.points == (numeric_point(0),)
    with pytest.raises(NoClauseMatches):
        eval_map_value(parse_map_spec("x > 1 => 0"), numeric_point(0))


def test_overlapping_clauses_are_reported_once(caplog):
    spec = parse_map_spec("name: overlap\nx >= 0 => 1\nx <= 1 => 2\notherwise => 3")
    with caplog.at_level(logging.WARNING, logger="bvslab.dsl"):
        overlaps = lint_overlaps(spec, [numeric_point(0), numeric_point(1), numeric_point(2)])
    assert overlaps == [(0, 1, (numeric_point(0),))]
    assert "clauses 1 and 2 overlap" in caplog.text


@pytest.mark.parametrize("name", ["e2", "e4", "e6", "e8", "e9"])
def test_shipped_rules_do_not_overlap(name):
    spec = parse_space_spec(read_corpus(f"{name}.space"))
    assert lint_overlaps(spec, sample_of(build_space(spec))) == []


def test_building_a_space_needs_a_carrier_and_full_coverage():
    with pytest.raises(SpaceError):
        build_space(parse_space_spec("otherwise => 1"))
    with pytest.raises(NoClauseMatches):
        build_space(parse_space_spec("carrier: [0, 1]\nsample: 0, 1\nx < y => 1"))


def test_map_variables_exclude_the_second_point():
    assert MAP_VARIABLES == frozenset({"x", "n"})
