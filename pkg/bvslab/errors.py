from __future__ import annotations

from typing import Any, List, Optional


class BvsError(Exception):
    """Raised when a lab operation cannot produce a result."""


class InvalidScalar(BvsError):
    """Raised when a text value is not an exact rational literal."""

    def __init__(self, text: str) -> None:
        self.text = text
        super().__init__(f"'{text}' is not a rational literal (use integers or p/q)")


class InvalidParameters(BvsError):
    """Raised when numeric parameters fall outside their admissible range."""


class InvalidCoefficients(InvalidParameters):
    """Raised when contraction coefficients are negative or do not sum to 1."""


class SpaceError(BvsError):
    """Raised when a distance table or carrier is malformed."""


class MalformedTable(SpaceError):
    """Raised when a table is not square or does not match the label count."""


class TableCellError(SpaceError):
    def __init__(self, message: str, i: int, j: Optional[int] = None) -> None:
        self.i = i
        self.j = j
        super().__init__(message)


class AsymmetricTable(TableCellError):
    """Raised when table[i][j] differs from table[j][i]."""

    def __init__(self, i: int, j: int) -> None:
        super().__init__(f"table[{i}][{j}] differs from table[{j}][{i}]", i, j)


class NegativeDistance(TableCellError):
    """Raised when a table cell is negative."""

    def __init__(self, i: int, j: int) -> None:
        super().__init__(f"table[{i}][{j}] is negative", i, j)


class ZeroOffDiagonal(TableCellError):
    """Raised when two distinct points are at distance 0."""

    def __init__(self, i: int, j: int) -> None:
        super().__init__(f"table[{i}][{j}] is 0 between distinct points", i, j)


class NonzeroDiagonal(TableCellError):
    """Raised when a point is not at distance 0 from itself."""

    def __init__(self, i: int) -> None:
        super().__init__(f"table[{i}][{i}] is not 0", i)


class PointNotInCarrier(SpaceError):
    """Raised when a point does not belong to the space it is used with."""

    def __init__(self, point: Any) -> None:
        self.point = point
        super().__init__(f"point {point} is not in the carrier")


class ImageOutsideCarrier(SpaceError):
    """Raised when a map sends a carrier point outside the carrier."""

    def __init__(self, point: Any, value: Any) -> None:
        self.point = point
        self.value = value
        super().__init__(f"image {value} of {point} is not in the carrier")


class LazyAxiomViolation(SpaceError):
    """Raised when a generated distance rule breaks an axiom on an evaluated pair."""

    def __init__(self, p: Any, q: Any, detail: str) -> None:
        self.p = p
        self.q = q
        self.detail = detail
        super().__init__(f"distance rule violates the axioms at ({p}, {q}): {detail}")


class EmptySelector(SpaceError):
    """Raised when a truncation selector selects no point."""


class UnknownSelector(SpaceError):
    """Raised when a selector cannot be resolved against a carrier."""


class DslError(BvsError):
    """Raised when a piecewise specification cannot be parsed or evaluated."""


class DslSyntaxError(DslError):
    """Raised with every diagnostic found while parsing a specification."""

    def __init__(self, diagnostics: List[Any]) -> None:
        self.diagnostics = list(diagnostics)
        lines = "; ".join(str(diagnostic) for diagnostic in self.diagnostics)
        super().__init__(lines or "syntax error")


class DslEvaluationError(DslError):
    """Raised when an expression cannot be evaluated for the given points."""


class NoClauseMatches(DslEvaluationError):
    """Raised when no clause of a piecewise rule applies."""

    def __init__(self, *points: Any) -> None:
        self.points = points
        shown = ", ".join(str(point) for point in points)
        super().__init__(f"no clause matches ({shown})")


class DivisionByZeroInRule(DslEvaluationError):
    """Raised when a rule divides by zero outside a guard."""

    def __init__(self, *points: Any) -> None:
        self.points = points
        shown = ", ".join(str(point) for point in points)
        super().__init__(f"division by zero while evaluating at ({shown})")


class ImageEscapesSample(BvsError):
    """Raised when the image of a point is not part of the finite table being checked."""

    def __init__(self, point: Any) -> None:
        self.point = point
        super().__init__(f"image of {point} leaves the finite sample; enlarge the sample")


class OrbitTooShort(BvsError):
    """Raised when an orbit window cannot cover the requested indices."""


class CompletenessError(BvsError):
    """Raised when the escape construction cannot be carried out."""


class SeedNotDistinct(CompletenessError):
    """Raised when a Cauchy seed repeats a point."""


class NoAdmissibleIndex(CompletenessError):
    """Raised when the recorded prefix cannot witness an index choice."""

    def __init__(self, point: Any) -> None:
        self.point = point
        super().__init__(f"no admissible index for {point}; extend the seed")


class ZeroDistanceToRange(CompletenessError):
    """Raised when an outsider is at distance 0 from the range of the seed."""

    def __init__(self, point: Any) -> None:
        self.point = point
        super().__init__(f"{point} is at distance 0 from the range: the seed converges to it")


class CorpusError(BvsError):
    """Raised when a corpus entry cannot be loaded."""


class UnknownExample(CorpusError):
    """Raised when a corpus name is neither shipped nor a readable file."""

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"unknown example '{name}'")


class ClaimFormatError(CorpusError):
    """Raised when a claims file is malformed."""
