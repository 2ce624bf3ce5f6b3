"""
Picard iteration with exact cycle detection, the s_n / t_n diagnostics and
horizon-bounded checks of the Suzuki-type premise.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from bvslab.axioms import Outcome
from bvslab.errors import (
    ImageEscapesSample,
    InvalidParameters,
    OrbitTooShort,
    PointNotInCarrier,
)
from bvslab.scalar import parse_scalar
from bvslab.space import FiniteSpace, Point, SelfMap, Space, sample_of

logger = logging.getLogger("bvslab.picard")

DEFAULT_N_GRID = (0, 1, 2, 4, 8, 16)
DEFAULT_EPSILONS = tuple(Fraction(1, 2 ** k) for k in range(5))
DELTA_HALVINGS = 6


@dataclass(frozen=True)
class FixedPoint:
    point: Point
    index: int


@dataclass(frozen=True)
class Cycle:
    entry: int
    period: int


@dataclass(frozen=True)
class BudgetExhausted:
    budget: int


OrbitStatus = Union[FixedPoint, Cycle, BudgetExhausted]


@dataclass(frozen=True)
class OrbitRecord:
    start: Point
    points: Tuple[Point, ...]
    s_seq: Tuple[Fraction, ...]
    status: OrbitStatus
    budget: int
    space: Space = field(compare=False, repr=False)
    selfmap: SelfMap = field(compare=False, repr=False)
    t_seq: Optional[Tuple[Fraction, ...]] = None
    limit: Optional[Point] = None

    @property
    def absorbed(self) -> bool:
        return not isinstance(self.status, BudgetExhausted)

    def point_at(self, index: int) -> Point:
        """u_index, continuing an absorbed orbit periodically past its record."""
        if index < len(self.points):
            return self.points[index]
        if isinstance(self.status, FixedPoint):
            return self.status.point
        if isinstance(self.status, Cycle):
            entry, period = self.status.entry, self.status.period
            return self.points[entry + (index - entry) % period]
        raise OrbitTooShort(f"orbit records {len(self.points)} point(s); index {index} was requested")

    def window(self, length: int) -> Tuple[Point, ...]:
        return tuple(self.point_at(k) for k in range(length))


def _require_member(space: Space, point: Point) -> None:
    if isinstance(space, FiniteSpace):
        if point not in space:
            raise PointNotInCarrier(point)
    elif not space.carrier.contains(point):
        raise PointNotInCarrier(point)


def iterate(
    space: Space,
    selfmap: SelfMap,
    start: Point,
    budget: int,
    limit: Optional[Point] = None,
) -> OrbitRecord:
    """
    Iterate ``selfmap`` from ``start`` for at most ``budget`` steps.

    Stops at the first fixed point or the first recurrence of an earlier point.
    When ``limit`` is given the orbit also carries t_n = rho(u_n, limit).
    """
    if isinstance(budget, bool) or not isinstance(budget, int) or budget < 1:
        raise InvalidParameters(f"budget must be a positive integer, got {budget!r}")
    _require_member(space, start)
    points: List[Point] = [start]
    seen: Dict[Point, int] = {start: 0}
    status: Optional[OrbitStatus] = None
    for step in range(budget):
        current = points[-1]
        following = selfmap.apply(current)
        if isinstance(space, FiniteSpace) and following not in space:
            raise ImageEscapesSample(current)
        if following == current:
            status = FixedPoint(current, step)
            break
        if following in seen:
            entry = seen[following]
            status = Cycle(entry, len(points) - entry)
            break
        seen[following] = len(points)
        points.append(following)
    if status is None:
        status = BudgetExhausted(budget)
    s_seq = tuple(space.distance(points[n], points[n + 1]) for n in range(len(points) - 1))
    t_seq = None
    if limit is not None:
        _require_member(space, limit)
        t_seq = tuple(space.distance(point, limit) for point in points)
    logger.info("Orbit from %s: %d point(s), %s", start, len(points), status)
    return OrbitRecord(
        start=start,
        points=tuple(points),
        s_seq=s_seq,
        status=status,
        budget=budget,
        space=space,
        selfmap=selfmap,
        t_seq=t_seq,
        limit=limit,
    )


@dataclass(frozen=True)
class SequenceVerdict:
    outcome: Outcome
    index: Optional[int] = None
    values: Tuple[Fraction, ...] = ()

    @property
    def passed(self) -> bool:
        return self.outcome is not Outcome.FAIL


def verify_sn_strict_decrease(orbit: OrbitRecord) -> SequenceVerdict:
    values = orbit.s_seq
    if len(values) < 2:
        return SequenceVerdict(Outcome.PASS_VACUOUS, values=values)
    for n in range(len(values) - 1):
        if values[n + 1] >= values[n]:
            return SequenceVerdict(Outcome.FAIL, n, values)
    return SequenceVerdict(Outcome.PASS, values=values)


def detect_fixed_points(
    space: Space, selfmap: SelfMap, sample: Optional[Iterable[Point]] = None
) -> Tuple[Point, ...]:
    return tuple(point for point in sample_of(space, sample) if selfmap.apply(point) == point)


@dataclass(frozen=True)
class SuzukiViolation:
    delta: Fraction
    start_index: int
    n: int
    m: int
    premise: Fraction
    conclusion: Fraction


@dataclass(frozen=True)
class SupportedUpToHorizon:
    delta: Fraction
    start_index: int


@dataclass(frozen=True)
class RefutedUpToGrid:
    witnesses: Tuple[SuzukiViolation, ...]


@dataclass(frozen=True)
class SuzukiFinding:
    epsilon: Fraction
    factor: Fraction
    result: Union[SupportedUpToHorizon, RefutedUpToGrid]
    horizon: int

    @property
    def supported(self) -> bool:
        return isinstance(self.result, SupportedUpToHorizon)


def default_delta_grid(epsilon: Fraction) -> Tuple[Fraction, ...]:
    return tuple(epsilon / 2 ** k for k in range(DELTA_HALVINGS + 1))


def _resolve_horizon(orbit: OrbitRecord, horizon: Optional[int], reach: int) -> int:
    # Every start index N needs the pair (N, N + 1) inside the window, so the
    # horizon is never below max(N) + 2.
    if horizon is not None and horizon < reach:
        raise InvalidParameters(f"horizon {horizon} leaves start index {reach - 2} without pairs; use at least {reach}")
    length = horizon if horizon is not None else orbit.budget
    if orbit.absorbed:
        return max(length, reach)
    if length < reach or length + 1 > len(orbit.points):
        raise OrbitTooShort(
            f"orbit records {len(orbit.points)} point(s) but the check needs {max(reach, length) + 1}"
        )
    return length


def check_suzuki(
    orbit: OrbitRecord,
    factor: Fraction,
    eps_list: Iterable[Fraction] = DEFAULT_EPSILONS,
    delta_grid: Optional[Sequence[Fraction]] = None,
    n_grid: Sequence[int] = DEFAULT_N_GRID,
    horizon: Optional[int] = None,
) -> List[SuzukiFinding]:
    """
    Test rho(u_n, u_m) < factor * eps + delta  =>  rho(u_{n+1}, u_{m+1}) <= eps.

    Candidates (delta, N) are scanned delta first, then N, over pairs
    N <= n < m < horizon. Findings only speak for the scanned window and grid.

    :param orbit: A recorded orbit; absorbed orbits are continued periodically.
    :param factor: The premise factor, 1 or s squared.
    :param eps_list: The tolerances to test.
    :param delta_grid: Candidate deltas; eps * 2^-k for k = 0..6 by default.
    :param n_grid: Candidate start indices.
    :param horizon: Exclusive bound on m; the orbit budget by default.
    :raises InvalidParameters: when ``horizon`` is below ``max(n_grid) + 2``.
    :raises OrbitTooShort: when an unabsorbed orbit does not cover the window.
    """
    factor = parse_scalar(factor)
    if factor <= 0:
        raise InvalidParameters("factor must be positive")
    if not n_grid or min(n_grid) < 0:
        raise InvalidParameters("start indices must be non-negative")
    reach = max(n_grid) + 2
    limit = _resolve_horizon(orbit, horizon, reach)
    window = orbit.window(limit + 1)
    space = orbit.space
    cache: Dict[Tuple[int, int], Fraction] = {}

    def rho(n: int, m: int) -> Fraction:
        if (n, m) not in cache:
            cache[(n, m)] = space.distance(window[n], window[m])
        return cache[(n, m)]

    findings = []
    for epsilon in eps_list:
        epsilon = parse_scalar(epsilon)
        if epsilon <= 0:
            raise InvalidParameters("every epsilon must be positive")
        deltas = tuple(parse_scalar(d) for d in delta_grid) if delta_grid else default_delta_grid(epsilon)
        if min(deltas) <= 0:
            raise InvalidParameters("every delta must be positive")
        witnesses: List[SuzukiViolation] = []
        result: Optional[SupportedUpToHorizon] = None
        for delta in deltas:
            for start_index in n_grid:
                violation = _first_suzuki_violation(rho, factor * epsilon + delta, epsilon, start_index, limit)
                if violation is None:
                    result = SupportedUpToHorizon(delta, start_index)
                    break
                n, m, premise, conclusion = violation
                witnesses.append(SuzukiViolation(delta, start_index, n, m, premise, conclusion))
            if result is not None:
                break
        findings.append(
            SuzukiFinding(epsilon, factor, result if result is not None else RefutedUpToGrid(tuple(witnesses)), limit)
        )
        logger.info("Suzuki check eps=%s: %s", epsilon, findings[-1].result)
    return findings


def _first_suzuki_violation(rho, bound: Fraction, epsilon: Fraction, start: int, limit: int):
    for n in range(start, limit):
        for m in range(n + 1, limit):
            premise = rho(n, m)
            if premise < bound:
                conclusion = rho(n + 1, m + 1)
                if conclusion > epsilon:
                    return n, m, premise, conclusion
    return None


@dataclass(frozen=True)
class CauchyRow:
    start_index: int
    diameter: Fraction
    pair: Optional[Tuple[int, int]] = None


def cauchy_profile(orbit: OrbitRecord, tail_starts: Sequence[int]) -> List[CauchyRow]:
    """
    Tail diameters max rho(u_n, u_m) over recorded n, m >= N.

    An empty tail has diameter 0.
    """
    if not tail_starts:
        return []
    reach = max(tail_starts)
    if orbit.absorbed:
        window = orbit.window(max(len(orbit.points), reach + 2))
    elif reach >= len(orbit.points):
        raise OrbitTooShort(f"tail start {reach} is beyond the {len(orbit.points)} recorded point(s)")
    else:
        window = orbit.points
    rows = []
    for start in tail_starts:
        diameter = Fraction(0)
        pair: Optional[Tuple[int, int]] = None
        for n in range(start, len(window)):
            for m in range(n + 1, len(window)):
                value = orbit.space.distance(window[n], window[m])
                if value > diameter:
                    diameter, pair = value, (n, m)
        rows.append(CauchyRow(start, diameter, pair))
    return rows
