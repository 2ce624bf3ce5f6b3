"""
Strict contractive conditions checked pairwise on a finite point set, and an
exact search for Reich coefficients.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from bvslab.axioms import Outcome
from bvslab.errors import ImageEscapesSample, InvalidCoefficients
from bvslab.scalar import format_scalar, parse_scalar
from bvslab.space import FiniteSpace, GeneratedSpace, Point, SelfMap, Space, sample_of

logger = logging.getLogger("bvslab.contraction")


class ConditionKind(str, Enum):
    BANACH = "banach"
    REICH = "reich"
    CIRIC_MAX = "ciric-max"
    KANNAN = "kannan"


@dataclass(frozen=True)
class ReichCoefficients:
    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, parse_scalar(getattr(self, name)))
        if min(self.a, self.b, self.c) < 0:
            raise InvalidCoefficients(f"coefficients must be non-negative: {self}")
        if self.a + self.b + self.c != 1:
            raise InvalidCoefficients(f"coefficients must sum to 1: {self}")

    def __str__(self) -> str:
        return f"({format_scalar(self.a)}, {format_scalar(self.b)}, {format_scalar(self.c)})"


@dataclass(frozen=True)
class ContractionWitness:
    x: Point
    y: Point
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class ContractionVerdict:
    kind: ConditionKind
    outcome: Outcome
    witness: Optional[ContractionWitness] = None
    pairs_checked: int = 0
    on_sample: bool = False

    @property
    def passed(self) -> bool:
        return self.outcome is Outcome.PASS


class _Distances:
    """Memoised distances and images over one sample."""

    def __init__(self, space: Space, selfmap: SelfMap, sample: Optional[Iterable[Point]]) -> None:
        self.space = space
        self.points = sample_of(space, sample)
        self.cache: Dict[Tuple[Point, Point], Fraction] = {}
        self.images: Dict[Point, Point] = {}
        for point in self.points:
            image = selfmap.apply(point)
            if isinstance(space, FiniteSpace) and image not in space:
                raise ImageEscapesSample(point)
            self.images[point] = image

    def __call__(self, p: Point, q: Point) -> Fraction:
        key = (p, q)
        if key not in self.cache:
            value = self.space.distance(p, q)
            self.cache[key] = value
            self.cache[(q, p)] = value
        return self.cache[key]

    def ordered_pairs(self) -> Iterable[Tuple[Point, Point]]:
        for p in self.points:
            for q in self.points:
                if p != q:
                    yield p, q

    def unordered_pairs(self) -> Iterable[Tuple[Point, Point]]:
        return combinations(self.points, 2)


RightHandSide = Callable[[Fraction, Fraction, Fraction], Fraction]


def _check(
    kind: ConditionKind,
    space: Space,
    selfmap: SelfMap,
    rhs: RightHandSide,
    ordered: bool,
    sample: Optional[Iterable[Point]],
) -> ContractionVerdict:
    rho = _Distances(space, selfmap, sample)
    pairs = rho.ordered_pairs() if ordered else rho.unordered_pairs()
    on_sample = isinstance(space, GeneratedSpace)
    checked = 0
    for x, y in pairs:
        tx, ty = rho.images[x], rho.images[y]
        lhs = rho(tx, ty)
        bound = rhs(rho(x, y), rho(x, tx), rho(y, ty))
        checked += 1
        if lhs >= bound:
            logger.info("%s fails at (%s, %s): %s >= %s", kind.value, x, y, lhs, bound)
            return ContractionVerdict(kind, Outcome.FAIL, ContractionWitness(x, y, lhs, bound), checked, on_sample)
    return ContractionVerdict(kind, Outcome.PASS, None, checked, on_sample)


def check_banach_contractive(
    space: Space, selfmap: SelfMap, sample: Optional[Iterable[Point]] = None
) -> ContractionVerdict:
    return _check(ConditionKind.BANACH, space, selfmap, lambda dxy, dx, dy: dxy, False, sample)


def check_reich(
    space: Space,
    selfmap: SelfMap,
    coeffs: ReichCoefficients,
    sample: Optional[Iterable[Point]] = None,
) -> ContractionVerdict:
    """
    Check rho(Tx, Ty) < a rho(x, y) + b rho(x, Tx) + c rho(y, Ty) on ordered pairs.

    The b and c terms weight different endpoints, so both orders of each pair are
    visited: (x_i, x_j) for every j != i, in point order.
    """
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    return _check(ConditionKind.REICH, space, selfmap, lambda dxy, dx, dy: a * dxy + b * dx + c * dy, True, sample)


def check_ciric_max(
    space: Space, selfmap: SelfMap, sample: Optional[Iterable[Point]] = None
) -> ContractionVerdict:
    return _check(ConditionKind.CIRIC_MAX, space, selfmap, lambda dxy, dx, dy: max(dxy, dx, dy), False, sample)


def check_kannan(
    space: Space,
    selfmap: SelfMap,
    b: Fraction,
    c: Fraction,
    sample: Optional[Iterable[Point]] = None,
) -> ContractionVerdict:
    b, c = parse_scalar(b), parse_scalar(c)
    if b < 0 or c < 0 or b + c != 1:
        raise InvalidCoefficients(f"Kannan coefficients need b, c >= 0 and b + c = 1, got {b}, {c}")
    return _check(ConditionKind.KANNAN, space, selfmap, lambda dxy, dx, dy: b * dx + c * dy, True, sample)


@dataclass(frozen=True)
class ReichFeasible:
    """
    A triple with positive least slack.

    ``vacuous`` marks a sample with fewer than two points: no pair constrains
    the triple, so (1, 0, 0) is returned with slack 0.
    """

    coefficients: ReichCoefficients
    slack: Fraction
    vacuous: bool = False


@dataclass(frozen=True)
class ReichInfeasible:
    best_slack: Fraction
    certificate: Tuple[Tuple[Point, Point], ...]


ReichSearch = Union[ReichFeasible, ReichInfeasible]

# slack(a, b) = p * a + q * b + r, with c = 1 - a - b substituted.
_Plane = Tuple[Fraction, Fraction, Fraction]


def _slack(plane: _Plane, a: Fraction, b: Fraction) -> Fraction:
    return plane[0] * a + plane[1] * b + plane[2]


def _inside(a: Fraction, b: Fraction) -> bool:
    return a >= 0 and b >= 0 and a + b <= 1


def _edge_crossings(first: _Plane, second: _Plane) -> List[Tuple[Fraction, Fraction]]:
    """Points on the simplex edges where two slack planes agree."""
    dp, dq, dr = first[0] - second[0], first[1] - second[1], first[2] - second[2]
    found = []
    # a = 0: dq * b + dr = 0
    if dq != 0:
        found.append((Fraction(0), -dr / dq))
    # b = 0: dp * a + dr = 0
    if dp != 0:
        found.append((-dr / dp, Fraction(0)))
    # a + b = 1: dp * a + dq * (1 - a) + dr = 0
    if dp != dq:
        a = -(dq + dr) / (dp - dq)
        found.append((a, 1 - a))
    return [(a, b) for a, b in found if _inside(a, b)]


def _triple_crossing(first: _Plane, second: _Plane, third: _Plane) -> Optional[Tuple[Fraction, Fraction]]:
    p1, q1, r1 = first[0] - second[0], first[1] - second[1], second[2] - first[2]
    p2, q2, r2 = first[0] - third[0], first[1] - third[1], third[2] - first[2]
    det = p1 * q2 - p2 * q1
    if det == 0:
        return None
    a = (r1 * q2 - r2 * q1) / det
    b = (p1 * r2 - p2 * r1) / det
    return (a, b) if _inside(a, b) else None


def find_reich_coefficients(
    space: Space, selfmap: SelfMap, sample: Optional[Iterable[Point]] = None
) -> ReichSearch:
    """
    Maximise the least Reich slack over the closed coefficient simplex.

    The optimum of a max-min of affine functions sits at a vertex of their
    arrangement: a simplex corner, an edge point where two slacks agree, or an
    interior point where three agree. All such points are enumerated exactly.

    :return: ``ReichFeasible`` with a triple of positive least slack, or
        ``ReichInfeasible`` with the pairs that are tight at the optimum. A sample
        of fewer than two points gives a vacuous ``ReichFeasible``.
    """
    rho = _Distances(space, selfmap, sample)
    planes: Dict[_Plane, Tuple[Point, Point]] = {}
    for x, y in rho.ordered_pairs():
        tx, ty = rho.images[x], rho.images[y]
        lhs, d, bx, cy = rho(tx, ty), rho(x, y), rho(x, tx), rho(y, ty)
        planes.setdefault((d - cy, bx - cy, cy - lhs), (x, y))
    constraints = list(planes)
    if not constraints:
        return ReichFeasible(ReichCoefficients(1, 0, 0), Fraction(0), vacuous=True)

    candidates: List[Tuple[Fraction, Fraction]] = [
        (Fraction(1), Fraction(0)),
        (Fraction(0), Fraction(1)),
        (Fraction(0), Fraction(0)),
    ]
    for first, second in combinations(constraints, 2):
        candidates.extend(_edge_crossings(first, second))
    for first, second, third in combinations(constraints, 3):
        point = _triple_crossing(first, second, third)
        if point is not None:
            candidates.append(point)

    best_point: Optional[Tuple[Fraction, Fraction]] = None
    best_value: Optional[Fraction] = None
    seen = set()
    for a, b in candidates:
        if (a, b) in seen:
            continue
        seen.add((a, b))
        value: Optional[Fraction] = None
        for plane in constraints:
            current = _slack(plane, a, b)
            if value is None or current < value:
                value = current
                if best_value is not None and value <= best_value:
                    break
        if best_value is None or value > best_value:
            best_point, best_value = (a, b), value
    assert best_point is not None and best_value is not None
    a, b = best_point
    logger.info("Reich search on %d constraint(s): best least slack %s at a=%s b=%s", len(constraints), best_value, a, b)
    if best_value > 0:
        return ReichFeasible(ReichCoefficients(a, b, 1 - a - b), best_value)
    tight = tuple(planes[plane] for plane in constraints if _slack(plane, a, b) == best_value)
    return ReichInfeasible(best_value, tight)


def grid_reich_points(denominator: int) -> Sequence[ReichCoefficients]:
    """Every simplex point whose coordinates share ``denominator``."""
    points = []
    for i in range(denominator + 1):
        for j in range(denominator + 1 - i):
            points.append(
                ReichCoefficients(
                    Fraction(i, denominator),
                    Fraction(j, denominator),
                    Fraction(denominator - i - j, denominator),
                )
            )
    return points
