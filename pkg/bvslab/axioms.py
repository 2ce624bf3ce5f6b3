"""
The b_v(s) polygon inequality on finite spaces.

For distinct x, y and any v distinct interior points u_1..u_v (all different
from x and y) the inequality asks

    rho(x, y) <= s * (rho(x, u_1) + rho(u_1, u_2) + ... + rho(u_v, y)).

Both checks enumerate unordered pairs in point order and interior tuples in
lexicographic permutation order, so the witnesses they report are stable.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from bvslab.errors import InvalidParameters
from bvslab.scalar import parse_scalar
from bvslab.space import FiniteSpace, Point

logger = logging.getLogger("bvslab.axioms")


class Outcome(str, Enum):
    PASS = "pass"
    PASS_VACUOUS = "pass-vacuous"
    FAIL = "fail"


@dataclass(frozen=True)
class BvsParams:
    v: int
    s: Fraction

    def __post_init__(self) -> None:
        if isinstance(self.v, bool) or not isinstance(self.v, int) or self.v < 1:
            raise InvalidParameters(f"v must be a positive integer, got {self.v!r}")
        object.__setattr__(self, "s", parse_scalar(self.s))
        if self.s < 1:
            raise InvalidParameters(f"s must be at least 1, got {self.s}")


@dataclass(frozen=True)
class AxiomWitness:
    x: Point
    y: Point
    interior: Tuple[Point, ...]
    lhs: Fraction
    chain_sum: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class AxiomVerdict:
    outcome: Outcome
    params: BvsParams
    witness: Optional[AxiomWitness] = None

    @property
    def passed(self) -> bool:
        return self.outcome is not Outcome.FAIL


@dataclass(frozen=True)
class MinimalS:
    v: int
    s_min: Optional[Fraction] = None
    raw: Optional[Fraction] = None
    x: Optional[Point] = None
    y: Optional[Point] = None
    interior: Tuple[Point, ...] = ()
    chain_sum: Optional[Fraction] = None

    @property
    def vacuous(self) -> bool:
        return self.s_min is None


def _first_violation(
    table: Sequence[Sequence[Fraction]], i: int, j: int, others: Sequence[int], v: int, s: Fraction
) -> Optional[Tuple[Tuple[int, ...], Fraction]]:
    """Depth-first search in lexicographic order for a chain with s * sum < table[i][j]."""
    target = table[i][j]
    chosen: List[int] = []
    used = [False] * len(others)

    def walk(previous: int, partial: Fraction) -> Optional[Tuple[Tuple[int, ...], Fraction]]:
        if s * partial >= target:
            return None
        if len(chosen) == v:
            total = partial + table[previous][j]
            return (tuple(chosen), total) if s * total < target else None
        for slot, k in enumerate(others):
            if used[slot]:
                continue
            used[slot] = True
            chosen.append(k)
            found = walk(k, partial + table[previous][k])
            chosen.pop()
            used[slot] = False
            if found is not None:
                return found
        return None

    return walk(i, Fraction(0))


def _shortest_chain(
    table: Sequence[Sequence[Fraction]], i: int, j: int, others: Sequence[int], v: int
) -> Tuple[Tuple[int, ...], Fraction]:
    """The lexicographically first chain of least sum through v distinct interior points."""
    best: List[Optional[Tuple[Tuple[int, ...], Fraction]]] = [None]
    chosen: List[int] = []
    used = [False] * len(others)

    def walk(previous: int, partial: Fraction) -> None:
        if best[0] is not None and partial >= best[0][1]:
            return
        if len(chosen) == v:
            total = partial + table[previous][j]
            if best[0] is None or total < best[0][1]:
                best[0] = (tuple(chosen), total)
            return
        for slot, k in enumerate(others):
            if used[slot]:
                continue
            used[slot] = True
            chosen.append(k)
            walk(k, partial + table[previous][k])
            chosen.pop()
            used[slot] = False

    walk(i, Fraction(0))
    assert best[0] is not None
    return best[0]


def check_bvs(space: FiniteSpace, params: BvsParams) -> AxiomVerdict:
    """
    Check the b_v(s) inequality over every admissible pair and interior tuple.

    :param space: A validated finite space.
    :param params: The (v, s) pair to check.
    :return: Pass, PassVacuous when fewer than v + 2 points exist, or Fail with
        the first violating witness.
    """
    size = len(space)
    if size < params.v + 2:
        return AxiomVerdict(Outcome.PASS_VACUOUS, params)
    table = space.table
    for i in range(size):
        for j in range(i + 1, size):
            others = [k for k in range(size) if k != i and k != j]
            found = _first_violation(table, i, j, others, params.v, params.s)
            if found is None:
                continue
            interior, chain_sum = found
            witness = AxiomWitness(
                x=space.points[i],
                y=space.points[j],
                interior=tuple(space.points[k] for k in interior),
                lhs=table[i][j],
                chain_sum=chain_sum,
                rhs=params.s * chain_sum,
            )
            logger.info("b_%d(%s) fails on %s at (%s, %s)", params.v, params.s, space.name, witness.x, witness.y)
            return AxiomVerdict(Outcome.FAIL, params, witness)
    return AxiomVerdict(Outcome.PASS, params)


def minimal_s(space: FiniteSpace, v: int) -> MinimalS:
    """
    Compute the least s in [1, inf) for which the space is b_v(s).

    The raw ratio max rho(x, y) / min chain may be below 1; it is kept in
    ``raw`` while ``s_min`` is clamped.
    """
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise InvalidParameters(f"v must be a positive integer, got {v!r}")
    size = len(space)
    if size < v + 2:
        return MinimalS(v=v)
    table = space.table
    best: Optional[MinimalS] = None
    for i in range(size):
        for j in range(i + 1, size):
            others = [k for k in range(size) if k != i and k != j]
            interior, chain_sum = _shortest_chain(table, i, j, others, v)
            ratio = table[i][j] / chain_sum
            if best is None or ratio > best.raw:
                best = MinimalS(
                    v=v,
                    s_min=max(ratio, Fraction(1)),
                    raw=ratio,
                    x=space.points[i],
                    y=space.points[j],
                    interior=tuple(space.points[k] for k in interior),
                    chain_sum=chain_sum,
                )
    assert best is not None
    return best


def classify(space: FiniteSpace, v_max: int) -> List[MinimalS]:
    if isinstance(v_max, bool) or not isinstance(v_max, int) or v_max < 1:
        raise InvalidParameters(f"v_max must be a positive integer, got {v_max!r}")
    return [minimal_s(space, v) for v in range(1, v_max + 1)]
