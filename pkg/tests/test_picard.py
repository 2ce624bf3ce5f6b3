import random

import pytest
from hypothesis import given, settings

from bvslab.axioms import Outcome
from bvslab.contraction import check_ciric_max, check_reich, grid_reich_points
from bvslab.errors import InvalidParameters, OrbitTooShort, PointNotInCarrier
from bvslab.picard import (
    BudgetExhausted,
    Cycle,
    FixedPoint,
    RefutedUpToGrid,
    SupportedUpToHorizon,
    cauchy_profile,
    check_suzuki,
    detect_fixed_points,
    iterate,
    verify_sn_strict_decrease,
)
from bvslab.space import PointList, SelfMap, make_finite_space, numeric_point, select_points
from conftest import F, spaces_with_maps

COARSE_GRID = grid_reich_points(4)


def labels(points):
    return [point.label for point in points]


def test_affine_orbit_reaches_its_fixed_point(e4):
    space, selfmap = e4
    orbit = iterate(space, selfmap, numeric_point(1), 10)
    assert labels(orbit.points) == ["1", "1/2", "0"]
    assert orbit.status == FixedPoint(numeric_point(0), 2)
    assert orbit.s_seq == (7, 1)
    assert orbit.absorbed
    assert orbit.point_at(7) == numeric_point(0)
    assert verify_sn_strict_decrease(orbit).outcome is Outcome.PASS


def test_halving_orbit_exhausts_its_budget(e8):
    space, selfmap = e8
    orbit = iterate(space, selfmap, numeric_point(1), 10)
    assert len(orbit.points) == 11
    assert orbit.status == BudgetExhausted(10)
    assert orbit.s_seq == tuple(1 + F(3, 2 ** n) for n in range(10))
    assert verify_sn_strict_decrease(orbit).passed
    with pytest.raises(OrbitTooShort):
        orbit.point_at(11)


def test_reciprocal_orbit_cycles(e2):
    space, selfmap = e2
    orbit = iterate(space, selfmap, space.point_for_value(F(1, 2)), 10)
    assert labels(orbit.points) == ["1/2", "1/4"]
    assert orbit.status == Cycle(entry=0, period=2)
    assert orbit.point_at(5).label == "1/4"
    assert labels(orbit.window(4)) == ["1/2", "1/4", "1/2", "1/4"]
    assert verify_sn_strict_decrease(orbit).outcome is Outcome.PASS_VACUOUS


def test_limit_distances_are_recorded(e8):
    space, selfmap = e8
    orbit = iterate(space, selfmap, numeric_point(1), 3, limit=numeric_point(0))
    assert orbit.t_seq == (1, F(1, 2), F(1, 4), F(1, 8))


def test_iteration_arguments_are_checked(e9):
    space, selfmap = e9
    with pytest.raises(InvalidParameters):
        iterate(space, selfmap, numeric_point(1), 0)
    with pytest.raises(PointNotInCarrier):
        iterate(space, selfmap, numeric_point(6), 5)


def test_fixed_points_on_a_sample(e4, e8):
    space, selfmap = e4
    sample = select_points(space, PointList((F(0), F(1, 4), F(1, 2), F(1), F(2))))
    assert detect_fixed_points(space, selfmap, sample) == (numeric_point(0),)
    space, selfmap = e8
    assert detect_fixed_points(space, selfmap) == ()


def test_suzuki_check_on_the_affine_orbit(e4):
    space, selfmap = e4
    orbit = iterate(space, selfmap, numeric_point(1), 10)
    findings = check_suzuki(orbit, F(4), [F(1), F(1, 2), F(1, 4), F(1, 8), F(1, 16)])
    assert all(finding.supported for finding in findings)
    assert findings[0].horizon == 18
    results = {finding.epsilon: finding.result for finding in findings}
    assert results[F(1)] == SupportedUpToHorizon(F(1), 0)
    assert results[F(1, 2)] == SupportedUpToHorizon(F(1, 2), 1)
    assert results[F(1, 4)] == SupportedUpToHorizon(F(1, 4), 0)
    assert results[F(1, 16)] == SupportedUpToHorizon(F(1, 16), 0)


def test_suzuki_check_refutes_the_halving_orbit(e8):
    space, selfmap = e8
    orbit = iterate(space, selfmap, numeric_point(1), 40)
    [finding] = check_suzuki(orbit, F(4), [F(1, 4)])
    assert isinstance(finding.result, RefutedUpToGrid)
    assert len(finding.result.witnesses) == 42
    assert all(witness.conclusion > 1 for witness in finding.result.witnesses)


def test_suzuki_check_needs_a_long_enough_orbit(e8):
    space, selfmap = e8
    orbit = iterate(space, selfmap, numeric_point(1), 5)
    with pytest.raises(OrbitTooShort):
        check_suzuki(orbit, F(4), [F(1, 4)])
    with pytest.raises(InvalidParameters):
        check_suzuki(orbit, F(0), [F(1, 4)], n_grid=(0,))


def test_tail_diameters_do_not_shrink_to_zero(e8):
    space, selfmap = e8
    orbit = iterate(space, selfmap, numeric_point(1), 19)
    [row] = cauchy_profile(orbit, [10])
    assert row.diameter == F(1027, 1024)
    assert row.pair == (10, 11)


def test_suzuki_check_rejects_a_window_shorter_than_the_start_grid(e8):
    space, selfmap = e8
    short = iterate(space, selfmap, numeric_point(1), 17)
    with pytest.raises(OrbitTooShort):
        check_suzuki(short, F(4), [F(1, 4)])
    orbit = iterate(space, selfmap, numeric_point(1), 40)
    with pytest.raises(InvalidParameters):
        check_suzuki(orbit, F(4), [F(1, 4)], horizon=10)
    [finding] = check_suzuki(orbit, F(4), [F(1, 4)], horizon=18)
    assert finding.horizon == 18
    assert not finding.supported


def test_suzuki_witnesses_recompute_on_the_orbit(e8):
    space, selfmap = e8
    orbit = iterate(space, selfmap, numeric_point(1), 40)
    [finding] = check_suzuki(orbit, F(4), [F(1, 4)])
    window = orbit.window(finding.horizon + 1)
    for witness in finding.result.witnesses:
        assert witness.start_index <= witness.n < witness.m < finding.horizon
        assert space.distance(window[witness.n], window[witness.m]) == witness.premise
        assert space.distance(window[witness.n + 1], window[witness.m + 1]) == witness.conclusion
        assert witness.premise < finding.factor * finding.epsilon + witness.delta
        assert witness.conclusion > finding.epsilon


@settings(max_examples=150, deadline=None)
@given(spaces_with_maps())
def test_orbits_are_well_formed(pair):
    space, selfmap = pair
    for start in space.points:
        orbit = iterate(space, selfmap, start, len(space))
        points = orbit.points
        assert len(set(points)) == len(points)
        for current, following in zip(points, points[1:]):
            assert selfmap.apply(current) == following
        status = orbit.status
        if isinstance(status, FixedPoint):
            assert status.index == len(points) - 1
            assert status.point == points[-1] == selfmap.apply(points[-1])
        else:
            assert isinstance(status, Cycle)
            assert status.period >= 2
            assert selfmap.apply(points[-1]) == points[status.entry]
            assert status.entry + status.period == len(points)
            assert all(points[status.entry + k] != points[status.entry] for k in range(1, status.period))


@settings(max_examples=100, deadline=None)
@given(spaces_with_maps(max_size=4))
def test_reich_maps_have_at_most_one_fixed_point(pair):
    space, selfmap = pair
    if any(check_reich(space, selfmap, point).passed for point in COARSE_GRID):
        assert len(detect_fixed_points(space, selfmap)) <= 1


def test_ciric_maps_on_finite_spaces_have_one_attracting_fixed_point():
    generator = random.Random(20240917)
    checked = 0
    for _ in range(500):
        size = generator.randint(2, 6)
        table = [[0] * size for _ in range(size)]
        for i in range(size):
            for j in range(i + 1, size):
                table[i][j] = table[j][i] = F(generator.randint(1, 9), generator.randint(1, 3))
        space = make_finite_space([f"p{k}" for k in range(size)], table)
        targets = generator.sample(space.points, generator.randint(1, size))
        selfmap = SelfMap.from_table("random", {point: generator.choice(targets) for point in space.points})
        passed = check_ciric_max(space, selfmap).passed
        checked += passed
        fixed = detect_fixed_points(space, selfmap)
        assert not passed or len(fixed) == 1
        for start in space.points:
            orbit = iterate(space, selfmap, start, size)
            assert not passed or orbit.status == FixedPoint(fixed[0], len(orbit.points) - 1)
    assert checked >= 50
