"""
Points, carriers, the two space representations and self-maps.

A ``FiniteSpace`` is a validated distance table; a ``GeneratedSpace`` is a
countable or interval carrier with a distance rule whose axioms are checked
lazily, pair by pair, when the rule is evaluated.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (
    Callable,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

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
from bvslab.scalar import format_scalar, parse_scalar

logger = logging.getLogger("bvslab.space")

# Indexed families are searched this far when a value has to be located.
FAMILY_SEARCH_LIMIT = 10_000


@dataclass(frozen=True)
class Point:
    label: str
    value: Optional[Fraction] = None
    index: Optional[int] = None

    def __str__(self) -> str:
        return self.label


def numeric_point(value: Fraction, index: Optional[int] = None) -> Point:
    value = Fraction(value)
    return Point(label=format_scalar(value), value=value, index=index)


class Carrier:
    def contains(self, point: Point) -> bool:
        raise NotImplementedError

    def point_for_value(self, value: Fraction) -> Optional[Point]:
        raise NotImplementedError

    def point_at(self, index: int) -> Point:
        raise UnknownSelector(f"carrier {self.describe()} is not indexed")

    def describe(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.describe()


@dataclass(frozen=True)
class Interval(Carrier):
    low: Fraction
    high: Optional[Fraction] = None
    low_closed: bool = True
    high_closed: bool = False

    def _admits(self, value: Fraction) -> bool:
        if value < self.low or (value == self.low and not self.low_closed):
            return False
        if self.high is None:
            return True
        return value < self.high or (value == self.high and self.high_closed)

    def contains(self, point: Point) -> bool:
        return point.value is not None and self._admits(point.value)

    def point_for_value(self, value: Fraction) -> Optional[Point]:
        return numeric_point(value) if self._admits(Fraction(value)) else None

    def describe(self) -> str:
        opening = "[" if self.low_closed else "("
        if self.high is None:
            return f"{opening}{format_scalar(self.low)}, inf)"
        closing = "]" if self.high_closed else ")"
        return f"{opening}{format_scalar(self.low)}, {format_scalar(self.high)}{closing}"


@dataclass(frozen=True)
class IndexedFamily(Carrier):
    """The family {value_at(n) : n >= start}."""

    value_at: Callable[[int], Fraction] = field(compare=False)
    start: int
    text: str = "indexed family"

    def point_at(self, index: int) -> Point:
        if index < self.start:
            raise UnknownSelector(f"index {index} precedes the first index {self.start} of {self.text}")
        return numeric_point(self.value_at(index), index)

    def _locate(self, value: Fraction) -> Optional[int]:
        previous = None
        direction = 0
        for index in range(self.start, self.start + FAMILY_SEARCH_LIMIT):
            current = self.value_at(index)
            if current == value:
                return index
            if previous is not None and direction == 0:
                direction = 1 if current > previous else -1 if current < previous else 0
            if direction > 0 and current > value:
                return None
            if direction < 0 and current < value:
                return None
            previous = current
        return None

    def contains(self, point: Point) -> bool:
        if point.value is None:
            return False
        if point.index is not None:
            return point.index >= self.start and self.value_at(point.index) == point.value
        return self._locate(point.value) is not None

    def point_for_value(self, value: Fraction) -> Optional[Point]:
        index = self._locate(Fraction(value))
        return None if index is None else numeric_point(value, index)

    def describe(self) -> str:
        return self.text


@dataclass(frozen=True)
class FiniteSet(Carrier):
    values: Tuple[Fraction, ...]

    def contains(self, point: Point) -> bool:
        return point.value is not None and point.index is None and point.value in self.values

    def point_for_value(self, value: Fraction) -> Optional[Point]:
        return numeric_point(value) if Fraction(value) in self.values else None

    def describe(self) -> str:
        return "{" + ", ".join(format_scalar(value) for value in self.values) + "}"


@dataclass(frozen=True)
class CarrierUnion(Carrier):
    parts: Tuple[Carrier, ...]

    def contains(self, point: Point) -> bool:
        return any(part.contains(point) for part in self.parts)

    def point_for_value(self, value: Fraction) -> Optional[Point]:
        for part in self.parts:
            point = part.point_for_value(value)
            if point is not None:
                return point
        return None

    def point_at(self, index: int) -> Point:
        indexed = [part for part in self.parts if isinstance(part, IndexedFamily)]
        if len(indexed) != 1:
            raise UnknownSelector(f"carrier {self.describe()} has no unique indexed family")
        return indexed[0].point_at(index)

    def describe(self) -> str:
        return " union ".join(part.describe() for part in self.parts)


@dataclass(frozen=True)
class FiniteSpace:
    points: Tuple[Point, ...]
    table: Tuple[Tuple[Fraction, ...], ...]
    name: str = "finite"
    _positions: Dict[Point, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_positions", {point: i for i, point in enumerate(self.points)}
        )

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, point: object) -> bool:
        return point in self._positions

    def position(self, point: Point) -> int:
        try:
            return self._positions[point]
        except KeyError:
            raise PointNotInCarrier(point) from None

    def distance(self, p: Point, q: Point) -> Fraction:
        return self.table[self.position(p)][self.position(q)]

    def point(self, label: str) -> Point:
        for point in self.points:
            if point.label == label:
                return point
        raise PointNotInCarrier(label)

    @property
    def labels(self) -> List[str]:
        return [point.label for point in self.points]


def make_finite_space(
    labels: Sequence[Union[str, Point]],
    table: Sequence[Sequence[Union[Fraction, int, str]]],
    name: str = "finite",
) -> FiniteSpace:
    """
    Validate a distance table and wrap it as a ``FiniteSpace``.

    Cells are scanned row by row; the first offending cell is reported.
    """
    points = tuple(label if isinstance(label, Point) else Point(str(label)) for label in labels)
    if len({point.label for point in points}) != len(points):
        raise MalformedTable("point labels must be unique")
    if len(table) != len(points) or any(len(row) != len(points) for row in table):
        raise MalformedTable(
            f"table must be {len(points)}x{len(points)} to match the labels"
        )
    cells = tuple(tuple(parse_scalar(cell) for cell in row) for row in table)
    size = len(points)
    for i in range(size):
        if cells[i][i] != 0:
            raise NonzeroDiagonal(i)
        for j in range(i + 1, size):
            if cells[i][j] != cells[j][i]:
                raise AsymmetricTable(i, j)
            if cells[i][j] < 0:
                raise NegativeDistance(i, j)
            if cells[i][j] == 0:
                raise ZeroOffDiagonal(i, j)
    return FiniteSpace(points=points, table=cells, name=name)


@dataclass(frozen=True)
class GeneratedSpace:
    name: str
    carrier: Carrier
    rule: Callable[[Point, Point], Fraction] = field(compare=False)
    completeness_note: str = "unknown"
    claimed_v: Optional[int] = None
    claimed_s: Optional[Fraction] = None
    default_selector: Optional["Selector"] = None

    def distance(self, p: Point, q: Point) -> Fraction:
        for point in (p, q):
            if not self.carrier.contains(point):
                raise PointNotInCarrier(point)
        forward = self.rule(p, q)
        if p == q:
            if forward != 0:
                raise LazyAxiomViolation(p, q, f"self-distance is {format_scalar(forward)}")
            return forward
        backward = self.rule(q, p)
        if forward != backward:
            raise LazyAxiomViolation(
                p, q, f"asymmetric ({format_scalar(forward)} vs {format_scalar(backward)})"
            )
        if forward < 0:
            raise LazyAxiomViolation(p, q, f"negative value {format_scalar(forward)}")
        if forward == 0:
            raise LazyAxiomViolation(p, q, "zero between distinct points")
        return forward

    def point_for_value(self, value: Fraction) -> Point:
        point = self.carrier.point_for_value(Fraction(value))
        if point is None:
            raise PointNotInCarrier(format_scalar(Fraction(value)))
        return point


Space = Union[FiniteSpace, GeneratedSpace]


def distance(space: Space, p: Point, q: Point) -> Fraction:
    return space.distance(p, q)


@dataclass(frozen=True)
class IndexRange:
    low: int
    high: int

    def __str__(self) -> str:
        return f"{self.low}..{self.high}"


@dataclass(frozen=True)
class PointList:
    values: Tuple[Fraction, ...]

    def __str__(self) -> str:
        return ", ".join(format_scalar(value) for value in self.values)


Selector = Union[IndexRange, PointList]


def parse_selector(text: str) -> Selector:
    """Parse ``2..9`` as an index range and ``0, 1/4, 1/2`` as an explicit list."""
    text = text.strip().strip("{}")
    if ".." in text:
        low, _, high = text.partition("..")
        try:
            return IndexRange(int(low), int(high))
        except ValueError:
            raise UnknownSelector(f"'{text}' is not an index range") from None
    return PointList(tuple(parse_scalar(part) for part in text.split(",") if part.strip()))


def select_points(space: Space, selector: Selector) -> List[Point]:
    if isinstance(space, FiniteSpace):
        if isinstance(selector, IndexRange):
            chosen = [p for p in space.points if p.index is not None and selector.low <= p.index <= selector.high]
        else:
            wanted = list(selector.values)
            chosen = [p for value in wanted for p in space.points if p.value == value]
            if len(chosen) != len(wanted):
                raise PointNotInCarrier(str(selector))
    elif isinstance(selector, IndexRange):
        chosen = [space.carrier.point_at(index) for index in range(selector.low, selector.high + 1)]
    else:
        chosen = [space.point_for_value(value) for value in selector.values]
    if not chosen:
        raise EmptySelector(f"selector '{selector}' selects no point")
    return chosen


def sample_of(space: Space, sample: Optional[Iterable[Point]] = None) -> List[Point]:
    """The finite set of points a pairwise check runs over."""
    if sample is not None:
        points = list(sample)
        if not points:
            raise EmptySelector("empty sample")
        return points
    if isinstance(space, FiniteSpace):
        return list(space.points)
    if space.default_selector is None:
        raise EmptySelector(f"space {space.name} declares no default sample")
    return select_points(space, space.default_selector)


def finite_from_points(space: Space, points: Sequence[Point], name: Optional[str] = None) -> FiniteSpace:
    if not points:
        raise EmptySelector("empty selection")
    table = [[space.distance(p, q) for q in points] for p in points]
    return make_finite_space(list(points), table, name=name or getattr(space, "name", "finite"))


def truncate(gspace: GeneratedSpace, selector: Union[Selector, Sequence[Point]]) -> FiniteSpace:
    if isinstance(selector, (IndexRange, PointList)):
        points = select_points(gspace, selector)
        name = f"{gspace.name}@{selector}"
    else:
        points = list(selector)
        name = gspace.name
    if not points:
        raise EmptySelector("empty selection")
    for point in points:
        if not gspace.carrier.contains(point):
            raise PointNotInCarrier(point)
    logger.debug("Truncating %s to %d point(s)", gspace.name, len(points))
    return finite_from_points(gspace, points, name=name)


@dataclass(frozen=True)
class SelfMap:
    name: str
    rule: Callable[[Point], Point] = field(compare=False)
    table: Optional[Mapping[Point, Point]] = field(default=None, compare=False)
    carrier: Optional[Carrier] = field(default=None, compare=False)

    @classmethod
    def from_table(cls, name: str, table: Mapping[Point, Point]) -> "SelfMap":
        frozen = dict(table)

        def rule(point: Point) -> Point:
            try:
                return frozen[point]
            except KeyError:
                raise PointNotInCarrier(point) from None

        return cls(name=name, rule=rule, table=frozen)

    @classmethod
    def from_values(
        cls, name: str, carrier: Carrier, evaluate: Callable[[Point], Fraction]
    ) -> "SelfMap":
        """A piecewise map whose clauses produce numeric values resolved in ``carrier``."""

        def rule(point: Point) -> Point:
            if not carrier.contains(point):
                raise PointNotInCarrier(point)
            value = evaluate(point)
            image = carrier.point_for_value(value)
            if image is None:
                raise ImageOutsideCarrier(point, format_scalar(value))
            return image

        return cls(name=name, rule=rule, carrier=carrier)

    @classmethod
    def identity(cls, name: str = "identity") -> "SelfMap":
        return cls(name=name, rule=lambda point: point)

    @classmethod
    def constant(cls, target: Point, name: str = "constant") -> "SelfMap":
        return cls(name=name, rule=lambda point: target)

    def apply(self, point: Point) -> Point:
        return self.rule(point)

    def __call__(self, point: Point) -> Point:
        return self.rule(point)


def apply(selfmap: SelfMap, point: Point) -> Point:
    return selfmap.apply(point)
