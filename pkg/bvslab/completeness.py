"""
The escape construction: from a Cauchy sequence that converges to no point of
the space, build a fixed-point-free map satisfying the Kannan condition.

Members u_k of the sequence are sent further along the sequence; every other
sample point is sent into the range far enough out that the whole tail lies
within b times its distance to the range.
"""

from __future__ import annotations

import logging
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from bvslab.axioms import Outcome
from bvslab.contraction import ContractionVerdict, check_kannan
from bvslab.dsl import (
    build_carrier,
    distance_function,
    expression_function,
    parse_carrier,
    parse_expression,
    MAP_VARIABLES,
    SPACE_VARIABLES,
)
from bvslab.errors import (
    ClaimFormatError,
    DslSyntaxError,
    InvalidParameters,
    NoAdmissibleIndex,
    PointNotInCarrier,
    SeedNotDistinct,
    ZeroDistanceToRange,
)
from bvslab.scalar import format_scalar, parse_scalar, parse_scalar_list
from bvslab.space import (
    Carrier,
    CarrierUnion,
    FiniteSet,
    GeneratedSpace,
    IndexRange,
    Point,
    SelfMap,
    Space,
    parse_selector,
)

logger = logging.getLogger("bvslab.completeness")


@dataclass(frozen=True)
class TailCertificate:
    """
    Bounds that discharge statements about the unrecorded tail of a seed.

    ``tail_upper(j)`` is a strict upper bound on rho(u_m, u_j) for every m > j.
    ``range_gap(x)`` is a lower bound on rho(x, u_m) for every m past the
    recorded prefix, or None when nothing is known.
    """

    tail_upper: Callable[[int], Fraction] = field(compare=False)
    range_gap: Callable[[Point], Optional[Fraction]] = field(compare=False)
    description: str = "certificate"


def monotone_certificate(
    values: Sequence[Fraction],
    limit: Fraction,
    tail_upper: Optional[Callable[[int], Fraction]] = None,
    gaps: Optional[Dict[Fraction, Fraction]] = None,
) -> TailCertificate:
    """
    Certificate for a real sequence decreasing strictly to ``limit`` under |x - y|.

    Every later term lies in (limit, u_j), so rho(u_m, u_j) < u_j - limit.
    Points above the last recorded term or at most the limit are kept away
    from the unrecorded tail by their distance to that interval.
    """
    last = values[-1]
    explicit = dict(gaps or {})

    def upper(j: int) -> Fraction:
        if tail_upper is not None:
            return tail_upper(j)
        if j >= len(values):
            raise NoAdmissibleIndex(f"u_{j}")
        return values[j] - limit

    def gap(point: Point) -> Optional[Fraction]:
        if point.value is None:
            return None
        if point.value in explicit:
            return explicit[point.value]
        if point.value > last:
            return point.value - last
        if point.value <= limit:
            return limit - point.value
        return None

    return TailCertificate(upper, gap, f"monotone decreasing to {format_scalar(limit)}")


@dataclass(frozen=True)
class CauchySeed:
    sequence: Tuple[Point, ...]
    space: Space = field(compare=False)
    certificate: Optional[TailCertificate] = field(default=None, compare=False)
    _indices: Dict[Point, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        seen: Dict[Point, int] = {}
        for k, point in enumerate(self.sequence):
            if point in seen:
                raise SeedNotDistinct(f"u_{seen[point]} and u_{k} are both {point}")
            seen[point] = k
        object.__setattr__(self, "_indices", seen)

    def index_of(self, point: Point) -> Optional[int]:
        return self._indices.get(point)

    @property
    def prefix_relative(self) -> bool:
        return self.certificate is None


@dataclass(frozen=True)
class BoundInstance:
    point: Point
    kind: str
    chosen: int
    bound: Fraction
    tail: Optional[Fraction]


@dataclass(frozen=True)
class EscapeConstruction:
    selfmap: SelfMap
    sample: Tuple[Point, ...]
    member_choice: Dict[int, int]
    outsider_choice: Dict[Point, int]
    range_distance: Dict[Point, Fraction]
    bounds_used: Tuple[BoundInstance, ...]
    prefix_relative: bool


def _check_b(b: Fraction) -> Fraction:
    b = parse_scalar(b)
    if not 0 < b < 1:
        raise InvalidParameters(f"b must satisfy 0 < b < 1, got {format_scalar(b)}")
    return b


def _admissible(seed: CauchySeed, candidate: int, bound: Fraction) -> Tuple[bool, Optional[Fraction]]:
    """Whether rho(u_m, u_candidate) < bound for every later m the seed can vouch for."""
    space, sequence = seed.space, seed.sequence
    tail = None
    if seed.certificate is not None:
        tail = seed.certificate.tail_upper(candidate)
        if tail > bound:
            return False, tail
    elif candidate >= len(sequence) - 1:
        return False, None
    for m in range(candidate + 1, len(sequence)):
        if space.distance(sequence[m], sequence[candidate]) >= bound:
            return False, tail
    return True, tail


def _smallest_admissible(seed: CauchySeed, point: Point, first: int, bound: Fraction) -> Tuple[int, Optional[Fraction]]:
    for candidate in range(first, len(seed.sequence)):
        ok, tail = _admissible(seed, candidate, bound)
        if ok:
            return candidate, tail
    raise NoAdmissibleIndex(point)


def distance_to_range(seed: CauchySeed, point: Point) -> Fraction:
    """D(x, A) over the recorded prefix, lowered by the certificate's gap for the tail."""
    prefix = min(seed.space.distance(point, member) for member in seed.sequence)
    if seed.certificate is None:
        return prefix
    gap = seed.certificate.range_gap(point)
    if gap is None:
        raise NoAdmissibleIndex(point)
    return min(prefix, gap)


def build_escape_map(seed: CauchySeed, sample: Sequence[Point], b: Fraction) -> EscapeConstruction:
    """
    Assemble the escape map on ``sample``, always taking the smallest admissible index.

    An outsider x goes to the smallest m whose tail certificate satisfies
    tail(m) <= b * D(x), where D(x) is the distance to the range, and whose
    recorded later terms stay strictly inside that bound. The certificate
    comparison is inclusive. With the shipped seed's tail 1/(m + 2), the
    outsider 2/5 (D = 1/15, b = 1/2) goes to m = 28, the term u = 1/30, not
    to 29.

    :raises NoAdmissibleIndex: when the recorded prefix is too short.
    :raises ZeroDistanceToRange: when an outsider is a limit of the range.
    """
    b = _check_b(b)
    if seed.prefix_relative:
        logger.warning("No tail certificate: the escape map is checked against the recorded prefix only")
    table: Dict[Point, Point] = {}
    member_choice: Dict[int, int] = {}
    outsider_choice: Dict[Point, int] = {}
    range_distance: Dict[Point, Fraction] = {}
    bounds: List[BoundInstance] = []
    for point in sample:
        n0 = seed.index_of(point)
        if n0 is not None:
            chosen = None
            for candidate in range(n0 + 1, len(seed.sequence)):
                bound = b * seed.space.distance(point, seed.sequence[candidate])
                ok, tail = _admissible(seed, candidate, bound)
                if ok:
                    chosen = candidate
                    bounds.append(BoundInstance(point, "member", candidate, bound, tail))
                    break
            if chosen is None:
                raise NoAdmissibleIndex(point)
            member_choice[n0] = chosen
            table[point] = seed.sequence[chosen]
            continue
        gap = distance_to_range(seed, point)
        if gap == 0:
            raise ZeroDistanceToRange(point)
        range_distance[point] = gap
        chosen, tail = _smallest_admissible(seed, point, 0, b * gap)
        bounds.append(BoundInstance(point, "outsider", chosen, b * gap, tail))
        outsider_choice[point] = chosen
        table[point] = seed.sequence[chosen]
    logger.info(
        "Escape map on %d point(s): %d member(s), %d outsider(s)",
        len(table),
        len(member_choice),
        len(outsider_choice),
    )
    return EscapeConstruction(
        selfmap=SelfMap.from_table("escape", table),
        sample=tuple(sample),
        member_choice=member_choice,
        outsider_choice=outsider_choice,
        range_distance=range_distance,
        bounds_used=tuple(bounds),
        prefix_relative=seed.prefix_relative,
    )


@dataclass(frozen=True)
class EscapeVerdict:
    outcome: Outcome
    fixed_point: Optional[Point] = None
    kannan: Optional[ContractionVerdict] = None
    pair_classes: Dict[str, int] = field(default_factory=dict)
    prefix_relative: bool = False

    @property
    def passed(self) -> bool:
        return self.outcome is Outcome.PASS


def _pair_classes(seed: CauchySeed, sample: Sequence[Point]) -> Dict[str, int]:
    counts = {"member/member": 0, "outsider/outsider": 0, "outsider/member": 0}
    for x in sample:
        for y in sample:
            if x == y:
                continue
            members = (seed.index_of(x) is not None) + (seed.index_of(y) is not None)
            counts[("outsider/outsider", "outsider/member", "member/member")[members]] += 1
    return counts


def verify_escape_map(construction: EscapeConstruction, seed: CauchySeed, b: Fraction) -> EscapeVerdict:
    b = _check_b(b)
    classes = _pair_classes(seed, construction.sample)
    for point in construction.sample:
        if construction.selfmap.apply(point) == point:
            return EscapeVerdict(Outcome.FAIL, fixed_point=point, pair_classes=classes,
                                 prefix_relative=construction.prefix_relative)
    verdict = check_kannan(seed.space, construction.selfmap, b, 1 - b, sample=construction.sample)
    return EscapeVerdict(
        verdict.outcome,
        kannan=verdict,
        pair_classes=classes,
        prefix_relative=construction.prefix_relative,
    )


@dataclass(frozen=True)
class EscapeDemo:
    """A seed file: the seed, the sample to build on, b and the control carrier."""

    name: str
    seed: CauchySeed
    members: Tuple[Point, ...]
    outsiders: Tuple[Point, ...]
    b: Fraction
    limit: Optional[Fraction] = None
    control_carrier: Optional[Carrier] = field(default=None, compare=False)

    @property
    def sample(self) -> Tuple[Point, ...]:
        return self.members + self.outsiders


_GENERATOR = re.compile(r"^(.*?)\s+for\s+n\s*=\s*(\d+)\s*\.\.\s*(\d+)\s*$")
_SEED_HEADERS = ("name", "carrier", "distance", "b", "sequence", "members", "outsiders",
                 "tail_upper", "range_gap", "limit", "control")
_SEED_LINE = re.compile(r"^\s*(" + "|".join(_SEED_HEADERS) + r")\s*:(.*)$")


def parse_seed(source: str) -> EscapeDemo:
    """
    Parse a seed file.

    Headers ``carrier:``, ``distance:`` (an expression in x and y), ``b:``,
    ``sequence:`` (``<expr in n> for n = a..b``, or bare rationals on the
    following lines), ``members:`` (an index range), ``outsiders:``,
    ``limit:``, ``tail_upper:`` (an expression in n), ``range_gap: <point>
    <bound>`` (repeatable) and ``control:`` (the carrier of the control run).
    """
    headers: Dict[str, str] = {}
    gaps: Dict[Fraction, Fraction] = {}
    values: List[Fraction] = []
    try:
        for number, raw in enumerate(source.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            match = _SEED_LINE.match(line)
            if match is None:
                values.append(parse_scalar(line))
                continue
            key, value = match.group(1), match.group(2).strip()
            if key == "range_gap":
                point, _, bound = value.partition(" ")
                gaps[parse_scalar(point)] = parse_scalar(bound)
            else:
                headers[key] = value
        for key in ("carrier", "distance", "b", "members"):
            if key not in headers:
                raise ClaimFormatError(f"seed file needs a '{key}:' header")
        carrier = build_carrier(parse_carrier(headers["carrier"]))
        rule = distance_function(parse_expression(headers["distance"], SPACE_VARIABLES))
        generator = _GENERATOR.match(headers.get("sequence", ""))
        if generator is not None:
            term = expression_function(parse_expression(generator.group(1), MAP_VARIABLES), "n")
            values = [term(n) for n in range(int(generator.group(2)), int(generator.group(3)) + 1)] + values
        if not values:
            raise ClaimFormatError("seed file lists no sequence points")
        limit = parse_scalar(headers["limit"]) if "limit" in headers else None
        tail_upper = None
        if "tail_upper" in headers:
            tail_upper = expression_function(parse_expression(headers["tail_upper"], MAP_VARIABLES), "n")
        control = build_carrier(parse_carrier(headers["control"])) if "control" in headers else None
        b = parse_scalar(headers["b"])
        members_selector = parse_selector(headers["members"])
        outsider_values = parse_scalar_list(headers.get("outsiders", ""))
    except DslSyntaxError as error:
        raise ClaimFormatError(f"bad seed file: {error}") from None
    space = GeneratedSpace(name=headers.get("name", "seed"), carrier=carrier, rule=rule)
    sequence = tuple(_resolve(carrier, value) for value in values)
    certificate = None
    if limit is not None:
        certificate = monotone_certificate(values, limit, tail_upper, gaps)
    seed = CauchySeed(sequence, space, certificate)
    if not isinstance(members_selector, IndexRange):
        raise ClaimFormatError("members: must be an index range such as 0..19")
    members = tuple(sequence[k] for k in range(members_selector.low, members_selector.high + 1))
    outsiders = tuple(_resolve(carrier, value) for value in outsider_values)
    return EscapeDemo(
        name=space.name,
        seed=seed,
        members=members,
        outsiders=outsiders,
        b=b,
        limit=limit,
        control_carrier=control,
    )


def _resolve(carrier: Carrier, value: Fraction) -> Point:
    point = carrier.point_for_value(value)
    if point is None:
        raise PointNotInCarrier(format_scalar(value))
    return point


def load_seed(path: str) -> EscapeDemo:
    if not os.path.isfile(path):
        raise ClaimFormatError(f"seed file '{path}' does not exist")
    with open(path, encoding="utf-8") as file:
        return parse_seed(file.read())


def control_run(demo: EscapeDemo) -> EscapeConstruction:
    """
    Rebuild the demo with the limit adjoined to the carrier and sampled.

    A seed whose limit lies in the space must be rejected with
    ``ZeroDistanceToRange``; reaching the return statement means it was not.
    """
    if demo.limit is None:
        raise InvalidParameters("the control run needs a 'limit:' header")
    carrier = demo.control_carrier or CarrierUnion((demo.seed.space.carrier, FiniteSet((demo.limit,))))
    space = GeneratedSpace(name=f"{demo.name}+limit", carrier=carrier, rule=demo.seed.space.rule)
    sequence = tuple(_resolve(carrier, point.value) for point in demo.seed.sequence)
    seed = CauchySeed(sequence, space, demo.seed.certificate)
    members = tuple(_resolve(carrier, point.value) for point in demo.members)
    outsiders = tuple(_resolve(carrier, point.value) for point in demo.outsiders)
    return build_escape_map(seed, members + outsiders + (_resolve(carrier, demo.limit),), demo.b)
