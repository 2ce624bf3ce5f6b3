"""
The piecewise language in which corpus spaces and maps are written.

A source file holds header lines (``name:``, ``carrier:``, ``claims:``,
``note:``, ``sample:``) and clauses ``<condition> => <expression>``, one per
line or separated by ``;``. The first clause whose condition holds gives the
value. See README.md for the full grammar.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from bvslab.errors import (
    DivisionByZeroInRule,
    DslEvaluationError,
    DslSyntaxError,
    InvalidScalar,
    NoClauseMatches,
    SpaceError,
    UnknownSelector,
)
from bvslab.scalar import format_scalar, parse_scalar
from bvslab.space import (
    Carrier,
    CarrierUnion,
    FiniteSet,
    GeneratedSpace,
    IndexedFamily,
    Interval,
    Point,
    Selector,
    SelfMap,
    parse_selector,
    select_points,
)

logger = logging.getLogger("bvslab.dsl")

SPACE_VARIABLES = frozenset({"x", "y", "m", "n"})
MAP_VARIABLES = frozenset({"x", "n"})
PREDICATES = {"even": 1, "odd": 1, "power": 2}
KEYWORDS = frozenset({"and", "or", "not", "otherwise", "abs", "union", "inf"})
HEADERS = ("name", "carrier", "claims", "note", "sample")

_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<number>\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*|∞)"
    r"|(?P<op>=>|==|!=|<=|>=|[≠≤≥=<>+\-−*×/÷^(),;:\[\]{}∪])"
)
_CANONICAL = {
    "==": "=",
    "≠": "!=",
    "≤": "<=",
    "≥": ">=",
    "−": "-",
    "×": "*",
    "÷": "/",
    "∪": "union",
    "∞": "inf",
}
_HEADER = re.compile(r"^\s*(" + "|".join(HEADERS) + r")\s*:(.*)$")
COMPARISONS = ("=", "!=", "<", "<=", ">", ">=")


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


# Expressions


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Abs:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Num, Var, Neg, Abs, BinOp]


# Conditions


@dataclass(frozen=True)
class Compare:
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Predicate:
    name: str
    args: Tuple[Expr, ...]


@dataclass(frozen=True)
class Not:
    operand: "Condition"


@dataclass(frozen=True)
class And:
    left: "Condition"
    right: "Condition"


@dataclass(frozen=True)
class Or:
    left: "Condition"
    right: "Condition"


@dataclass(frozen=True)
class Otherwise:
    pass


Condition = Union[Compare, Predicate, Not, And, Or, Otherwise]


@dataclass(frozen=True)
class Clause:
    condition: Condition
    expression: Expr
    line: int = field(default=0, compare=False)


# Carrier declarations


@dataclass(frozen=True)
class IntervalDecl:
    low: Expr
    high: Optional[Expr]
    low_closed: bool
    high_closed: bool


@dataclass(frozen=True)
class FamilyDecl:
    variable: str
    expression: Expr
    start: int


@dataclass(frozen=True)
class FiniteDecl:
    values: Tuple[Expr, ...]


@dataclass(frozen=True)
class UnionDecl:
    parts: Tuple["CarrierDecl", ...]


CarrierDecl = Union[IntervalDecl, FamilyDecl, FiniteDecl, UnionDecl]


@dataclass(frozen=True)
class SpaceSpec:
    clauses: Tuple[Clause, ...]
    name: str = "space"
    carrier: Optional[CarrierDecl] = None
    claimed_v: Optional[int] = None
    claimed_s: Optional[Fraction] = None
    completeness_note: str = "unknown"
    sample: Optional[Selector] = None
    note: str = ""


@dataclass(frozen=True)
class MapSpec:
    clauses: Tuple[Clause, ...]
    name: str = "map"
    note: str = ""


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    column: int


class _ParseFailure(Exception):
    def __init__(self, diagnostic: ParseDiagnostic) -> None:
        self.diagnostic = diagnostic
        super().__init__(str(diagnostic))


def _tokenize(text: str, line: int, offset: int = 0) -> List[_Token]:
    tokens: List[_Token] = []
    position = 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        column = offset + position + 1
        if match is None:
            char = text[position]
            if char == "." and tokens and tokens[-1].kind == "number":
                message = "decimal literals are not allowed; write p/q"
            else:
                message = f"unexpected character '{char}'"
            raise _ParseFailure(ParseDiagnostic(line, column, message))
        kind = match.lastgroup
        raw = match.group()
        if kind != "ws":
            tokens.append(_Token(kind, _CANONICAL.get(raw, raw), column))
        position = match.end()
    return tokens


class _Parser:
    """Recursive descent over one clause or one header value."""

    def __init__(self, tokens: Sequence[_Token], line: int, variables: FrozenSet[str], end_column: int) -> None:
        self.tokens = list(tokens)
        self.line = line
        self.variables = variables
        self.end_column = end_column
        self.position = 0

    def fail(self, message: str, token: Optional[_Token] = None) -> _ParseFailure:
        column = token.column if token is not None else self.end_column
        return _ParseFailure(ParseDiagnostic(self.line, column, message))

    def peek(self, ahead: int = 0) -> Optional[_Token]:
        index = self.position + ahead
        return self.tokens[index] if index < len(self.tokens) else None

    def at(self, *texts: str) -> bool:
        token = self.peek()
        return token is not None and token.kind != "number" and token.text in texts

    def advance(self) -> _Token:
        token = self.peek()
        if token is None:
            raise self.fail("unexpected end of line")
        self.position += 1
        return token

    def expect(self, text: str) -> _Token:
        token = self.peek()
        if token is None or token.text != text or token.kind == "number":
            shown = "end of line" if token is None else f"'{token.text}'"
            raise self.fail(f"expected '{text}' but found {shown}", token)
        self.position += 1
        return token

    def done(self) -> bool:
        return self.position >= len(self.tokens)

    # clause := condition '=>' expression
    def clause(self) -> Clause:
        if self.at("otherwise"):
            self.advance()
            condition: Condition = Otherwise()
        else:
            condition = self.disjunction()
        arrow = self.expect("=>")
        if self.done():
            raise self.fail("expected an expression after '=>'", arrow)
        expression = self.expression()
        if not self.done():
            token = self.peek()
            raise self.fail(f"unexpected '{token.text}' after the expression", token)
        return Clause(condition, expression, self.line)

    def disjunction(self) -> Condition:
        condition = self.conjunction()
        while self.at("or"):
            self.advance()
            condition = Or(condition, self.conjunction())
        return condition

    def conjunction(self) -> Condition:
        condition = self.negation()
        while self.at("and"):
            self.advance()
            condition = And(condition, self.negation())
        return condition

    def negation(self) -> Condition:
        if self.at("not"):
            self.advance()
            return Not(self.negation())
        return self.atom_condition()

    def atom_condition(self) -> Condition:
        token = self.peek()
        if token is None:
            raise self.fail("expected a condition")
        if token.kind == "ident" and token.text in PREDICATES:
            return self.predicate()
        if token.text == "(" and token.kind == "op":
            saved = self.position
            try:
                self.advance()
                condition = self.disjunction()
                self.expect(")")
                if not self.at(*COMPARISONS, "+", "-", "*", "/", "^"):
                    return condition
            except _ParseFailure:
                pass
            self.position = saved
        return self.comparison()

    def predicate(self) -> Predicate:
        token = self.advance()
        self.expect("(")
        args = [self.expression()]
        while self.at(","):
            self.advance()
            args.append(self.expression())
        self.expect(")")
        if len(args) != PREDICATES[token.text]:
            raise self.fail(
                f"{token.text} takes {PREDICATES[token.text]} argument(s), got {len(args)}", token
            )
        return Predicate(token.text, tuple(args))

    def comparison(self) -> Compare:
        left = self.expression()
        token = self.peek()
        if token is None or token.kind != "op" or token.text not in COMPARISONS:
            raise self.fail("expected a comparison operator", token)
        self.advance()
        return Compare(token.text, left, self.expression())

    # expression := term (('+' | '-') term)*
    def expression(self) -> Expr:
        expr = self.term()
        while self.at("+", "-"):
            op = self.advance().text
            expr = BinOp(op, expr, self.term())
        return expr

    def term(self) -> Expr:
        expr = self.unary()
        while True:
            if self.at("*", "/"):
                op_token = self.advance()
                right = self.unary()
                if op_token.text == "/" and right == Num(0):
                    raise self.fail("division by zero in literal", op_token)
                expr = BinOp(op_token.text, expr, right)
            elif isinstance(expr, Num) and self._implicit_factor():
                expr = BinOp("*", expr, self.unary())
            else:
                return expr

    def _implicit_factor(self) -> bool:
        token = self.peek()
        if token is None:
            return False
        if token.kind == "op":
            return token.text == "("
        return token.kind == "ident" and token.text not in KEYWORDS and token.text not in PREDICATES

    def unary(self) -> Expr:
        if self.at("-"):
            self.advance()
            return Neg(self.unary())
        if self.at("+"):
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.at("^"):
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self) -> Expr:
        token = self.peek()
        if token is None:
            raise self.fail("expected an expression")
        if token.kind == "number":
            self.advance()
            return Num(int(token.text))
        if token.kind == "ident":
            if token.text == "abs":
                self.advance()
                self.expect("(")
                inner = self.expression()
                self.expect(")")
                return Abs(inner)
            if token.text in KEYWORDS or token.text in PREDICATES:
                raise self.fail(f"'{token.text}' cannot start an expression", token)
            if token.text not in self.variables:
                allowed = ", ".join(sorted(self.variables))
                raise self.fail(f"unknown variable '{token.text}' (allowed: {allowed})", token)
            self.advance()
            return Var(token.text)
        if token.text == "(":
            self.advance()
            inner = self.expression()
            self.expect(")")
            return inner
        raise self.fail(f"unexpected '{token.text}'", token)

    # carrier := part ('union' part)*
    def carrier(self) -> CarrierDecl:
        parts = [self.carrier_part()]
        while self.at("union"):
            self.advance()
            parts.append(self.carrier_part())
        if not self.done():
            token = self.peek()
            raise self.fail(f"unexpected '{token.text}' in carrier", token)
        return parts[0] if len(parts) == 1 else UnionDecl(tuple(parts))

    def carrier_part(self) -> CarrierDecl:
        token = self.peek()
        if token is not None and token.text in ("[", "("):
            return self.interval()
        if token is not None and token.text == "{":
            return self.braced()
        raise self.fail("expected an interval '[a, b]' or a set '{...}'", token)

    def interval(self) -> IntervalDecl:
        low_closed = self.advance().text == "["
        low = self.expression()
        self.expect(",")
        high: Optional[Expr]
        if self.at("inf"):
            self.advance()
            high = None
        else:
            high = self.expression()
        token = self.peek()
        if token is None or token.text not in ("]", ")"):
            raise self.fail("expected ']' or ')' to close the interval", token)
        self.advance()
        if high is None and token.text == "]":
            raise self.fail("an unbounded interval must end with ')'", token)
        return IntervalDecl(low, high, low_closed, token.text == "]")

    def braced(self) -> CarrierDecl:
        self.expect("{")
        outer = self.variables
        first_token = self.peek()
        # Family expressions may use any single index variable.
        index_variable = self._family_variable()
        if index_variable is not None:
            self.variables = frozenset({index_variable})
            expression = self.expression()
            self.variables = outer
            self.expect(":")
            variable_token = self.advance()
            if variable_token.text != index_variable:
                raise self.fail(f"expected index variable '{index_variable}'", variable_token)
            self.expect(">=")
            start_token = self.advance()
            if start_token.kind != "number":
                raise self.fail("expected an integer start index", start_token)
            self.expect("}")
            return FamilyDecl(index_variable, expression, int(start_token.text))
        self.variables = frozenset()
        values = [self.expression()]
        while self.at(","):
            self.advance()
            values.append(self.expression())
        self.variables = outer
        if not self.at("}"):
            raise self.fail("expected '}' to close the set", self.peek() or first_token)
        self.advance()
        return FiniteDecl(tuple(values))

    def _family_variable(self) -> Optional[str]:
        depth = 0
        names = set()
        for token in self.tokens[self.position:]:
            if token.text == "{":
                depth += 1
            elif token.text == "}":
                if depth == 0:
                    return None
                depth -= 1
            elif token.text == ":" and depth == 0:
                return names.pop() if len(names) == 1 else None
            elif token.kind == "ident" and token.text not in KEYWORDS:
                names.add(token.text)
        return None


# Evaluation


def _env_for(p: Point, q: Optional[Point] = None) -> Dict[str, Optional[Fraction]]:
    if q is None:
        return {"x": p.value, "n": None if p.index is None else Fraction(p.index)}
    return {
        "x": p.value,
        "y": q.value,
        "m": None if p.index is None else Fraction(p.index),
        "n": None if q.index is None else Fraction(q.index),
    }


class _ZeroDivision(Exception):
    pass


def evaluate_expression(expr: Expr, env: Dict[str, Optional[Fraction]]) -> Fraction:
    if isinstance(expr, Num):
        return Fraction(expr.value)
    if isinstance(expr, Var):
        value = env.get(expr.name)
        if value is None:
            raise DslEvaluationError(f"variable '{expr.name}' has no value for this point")
        return value
    if isinstance(expr, Neg):
        return -evaluate_expression(expr.operand, env)
    if isinstance(expr, Abs):
        return abs(evaluate_expression(expr.operand, env))
    left = evaluate_expression(expr.left, env)
    right = evaluate_expression(expr.right, env)
    if expr.op == "+":
        return left + right
    if expr.op == "-":
        return left - right
    if expr.op == "*":
        return left * right
    if expr.op == "/":
        if right == 0:
            raise _ZeroDivision()
        return left / right
    if right.denominator != 1:
        raise DslEvaluationError(f"exponent {format_scalar(right)} is not an integer")
    if left == 0 and right < 0:
        raise _ZeroDivision()
    return left ** int(right)


def _is_power_of(base: Fraction, value: Fraction) -> bool:
    if base.denominator != 1 or value.denominator != 1 or base < 2 or value < base:
        return False
    number, root = int(value), int(base)
    while number % root == 0:
        number //= root
    return number == 1


def evaluate_condition(condition: Condition, env: Dict[str, Optional[Fraction]]) -> bool:
    if isinstance(condition, Otherwise):
        return True
    if isinstance(condition, Not):
        return not evaluate_condition(condition.operand, env)
    if isinstance(condition, And):
        return evaluate_condition(condition.left, env) and evaluate_condition(condition.right, env)
    if isinstance(condition, Or):
        return evaluate_condition(condition.left, env) or evaluate_condition(condition.right, env)
    if isinstance(condition, Predicate):
        args = [evaluate_expression(arg, env) for arg in condition.args]
        if condition.name == "power":
            return _is_power_of(args[0], args[1])
        value = args[0]
        if value.denominator != 1:
            return False
        return (value.numerator % 2 == 0) == (condition.name == "even")
    left = evaluate_expression(condition.left, env)
    right = evaluate_expression(condition.right, env)
    return {
        "=": left == right,
        "!=": left != right,
        "<": left < right,
        "<=": left <= right,
        ">": left > right,
        ">=": left >= right,
    }[condition.op]


def _evaluate_clauses(clauses: Sequence[Clause], env: Dict[str, Optional[Fraction]], points: Tuple[Point, ...]) -> Fraction:
    try:
        for clause in clauses:
            if evaluate_condition(clause.condition, env):
                return evaluate_expression(clause.expression, env)
    except _ZeroDivision:
        raise DivisionByZeroInRule(*points) from None
    raise NoClauseMatches(*points)


def eval_distance(spec: SpaceSpec, p: Point, q: Point) -> Fraction:
    return _evaluate_clauses(spec.clauses, _env_for(p, q), (p, q))


def eval_map_value(spec: MapSpec, p: Point) -> Fraction:
    return _evaluate_clauses(spec.clauses, _env_for(p), (p,))


def _constant(expr: Expr) -> Fraction:
    try:
        return evaluate_expression(expr, {})
    except _ZeroDivision:
        raise DivisionByZeroInRule() from None


def build_carrier(decl: CarrierDecl) -> Carrier:
    if isinstance(decl, UnionDecl):
        return CarrierUnion(tuple(build_carrier(part) for part in decl.parts))
    if isinstance(decl, IntervalDecl):
        return Interval(
            low=_constant(decl.low),
            high=None if decl.high is None else _constant(decl.high),
            low_closed=decl.low_closed,
            high_closed=decl.high_closed,
        )
    if isinstance(decl, FiniteDecl):
        return FiniteSet(tuple(_constant(value) for value in decl.values))

    value_at = expression_function(decl.expression, decl.variable)
    return IndexedFamily(value_at=value_at, start=decl.start, text=format_carrier(decl))


# Parsing


def _split_clauses(tokens: List[_Token]) -> List[List[_Token]]:
    groups: List[List[_Token]] = [[]]
    for token in tokens:
        if token.kind == "op" and token.text == ";":
            groups.append([])
        else:
            groups[-1].append(token)
    return [group for group in groups if group]


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def _parse_claims_header(value: str, line: int, column: int) -> Tuple[Optional[int], Optional[Fraction], str]:
    claimed_v: Optional[int] = None
    claimed_s: Optional[Fraction] = None
    words: List[str] = []
    for word in value.split():
        key, sep, raw = word.partition("=")
        try:
            if sep and key == "v":
                claimed_v = int(raw)
                if claimed_v < 1:
                    raise ValueError(raw)
            elif sep and key == "s":
                claimed_s = parse_scalar(raw)
            else:
                words.append(word)
        except (ValueError, InvalidScalar):
            raise _ParseFailure(ParseDiagnostic(line, column, f"bad claims entry '{word}'")) from None
    return claimed_v, claimed_s, " ".join(words) or "unknown"


def _parse_source(source: str, variables: FrozenSet[str]) -> Tuple[Dict[str, Tuple[str, int, int]], List[Clause], List[ParseDiagnostic]]:
    headers: Dict[str, Tuple[str, int, int]] = {}
    clauses: List[Clause] = []
    diagnostics: List[ParseDiagnostic] = []
    for number, raw_line in enumerate(source.splitlines(), start=1):
        line = _strip_comment(raw_line)
        if not line.strip():
            continue
        header = _HEADER.match(line)
        if header is not None:
            key, value = header.group(1), header.group(2)
            if key in headers:
                diagnostics.append(ParseDiagnostic(number, 1, f"duplicate '{key}:' header"))
            headers[key] = (value.strip(), number, header.start(2) + 1)
            continue
        try:
            tokens = _tokenize(line, number)
        except _ParseFailure as failure:
            diagnostics.append(failure.diagnostic)
            continue
        for group in _split_clauses(tokens):
            end_column = group[-1].column + len(group[-1].text)
            parser = _Parser(group, number, variables, end_column)
            try:
                clauses.append(parser.clause())
            except _ParseFailure as failure:
                diagnostics.append(failure.diagnostic)
    if not clauses and not diagnostics:
        diagnostics.append(ParseDiagnostic(1, 1, "no clauses"))
    for index, clause in enumerate(clauses[:-1]):
        if isinstance(clause.condition, Otherwise):
            diagnostics.append(
                ParseDiagnostic(clause.line, 1, "'otherwise' must be the last clause")
            )
            break
    return headers, clauses, diagnostics


def parse_expression(text: str, variables: Iterable[str], line: int = 1, column: int = 1) -> Expr:
    try:
        tokens = _tokenize(text, line, column - 1)
        parser = _Parser(tokens, line, frozenset(variables), column + len(text))
        expr = parser.expression()
        if not parser.done():
            token = parser.peek()
            raise parser.fail(f"unexpected '{token.text}' after the expression", token)
        return expr
    except _ParseFailure as failure:
        raise DslSyntaxError([failure.diagnostic]) from None


def expression_function(expr: Expr, variable: str):
    """A one-variable function over an integer argument, e.g. a sequence term."""

    def evaluate(value: Union[int, Fraction]) -> Fraction:
        try:
            return evaluate_expression(expr, {variable: Fraction(value)})
        except _ZeroDivision:
            raise DivisionByZeroInRule(value) from None

    return evaluate


def distance_function(expr: Expr):
    def evaluate(p: Point, q: Point) -> Fraction:
        if p == q:
            return Fraction(0)
        try:
            return evaluate_expression(expr, _env_for(p, q))
        except _ZeroDivision:
            raise DivisionByZeroInRule(p, q) from None

    return evaluate


def parse_carrier(text: str, line: int = 1, column: int = 1) -> CarrierDecl:
    try:
        tokens = _tokenize(text, line, column - 1)
        end_column = column + len(text)
        return _Parser(tokens, line, frozenset(), end_column).carrier()
    except _ParseFailure as failure:
        raise DslSyntaxError([failure.diagnostic]) from None


def parse_space_spec(source: str) -> SpaceSpec:
    """
    Parse a space file.

    :param source: The text of the file.
    :raises DslSyntaxError: with one diagnostic per broken line.
    """
    headers, clauses, diagnostics = _parse_source(source, SPACE_VARIABLES)
    carrier: Optional[CarrierDecl] = None
    claimed_v: Optional[int] = None
    claimed_s: Optional[Fraction] = None
    completeness_note = "unknown"
    sample: Optional[Selector] = None
    if "carrier" in headers:
        text, line, column = headers["carrier"]
        try:
            carrier = parse_carrier(text, line, column)
        except DslSyntaxError as error:
            diagnostics.extend(error.diagnostics)
    if "claims" in headers:
        text, line, column = headers["claims"]
        try:
            claimed_v, claimed_s, completeness_note = _parse_claims_header(text, line, column)
        except _ParseFailure as failure:
            diagnostics.append(failure.diagnostic)
    if "sample" in headers:
        text, line, column = headers["sample"]
        try:
            sample = parse_selector(text)
        except (InvalidScalar, UnknownSelector) as error:
            diagnostics.append(ParseDiagnostic(line, column, str(error)))
    if diagnostics:
        raise DslSyntaxError(sorted(diagnostics, key=lambda d: (d.line, d.column)))
    return SpaceSpec(
        clauses=tuple(clauses),
        name=headers.get("name", ("space", 0, 0))[0],
        carrier=carrier,
        claimed_v=claimed_v,
        claimed_s=claimed_s,
        completeness_note=completeness_note,
        sample=sample,
        note=headers.get("note", ("", 0, 0))[0],
    )


def parse_map_spec(source: str) -> MapSpec:
    headers, clauses, diagnostics = _parse_source(source, MAP_VARIABLES)
    for key in ("carrier", "claims", "sample"):
        if key in headers:
            _, line, column = headers[key]
            diagnostics.append(ParseDiagnostic(line, column, f"'{key}:' is not allowed in a map file"))
    if diagnostics:
        raise DslSyntaxError(sorted(diagnostics, key=lambda d: (d.line, d.column)))
    return MapSpec(
        clauses=tuple(clauses),
        name=headers.get("name", ("map", 0, 0))[0],
        note=headers.get("note", ("", 0, 0))[0],
    )


# Printing


def format_expression(expr: Expr) -> str:
    if isinstance(expr, Num):
        return str(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Neg):
        return f"(-{format_expression(expr.operand)})"
    if isinstance(expr, Abs):
        return f"abs({format_expression(expr.operand)})"
    return f"({format_expression(expr.left)} {expr.op} {format_expression(expr.right)})"


def format_condition(condition: Condition) -> str:
    if isinstance(condition, Otherwise):
        return "otherwise"
    if isinstance(condition, Not):
        return f"not {format_condition(condition.operand)}"
    if isinstance(condition, And):
        return f"({format_condition(condition.left)} and {format_condition(condition.right)})"
    if isinstance(condition, Or):
        return f"({format_condition(condition.left)} or {format_condition(condition.right)})"
    if isinstance(condition, Predicate):
        return f"{condition.name}({', '.join(format_expression(arg) for arg in condition.args)})"
    return f"{format_expression(condition.left)} {condition.op} {format_expression(condition.right)}"


def format_clause(clause: Clause) -> str:
    return f"{format_condition(clause.condition)} => {format_expression(clause.expression)}"


def format_carrier(decl: CarrierDecl) -> str:
    if isinstance(decl, UnionDecl):
        return " union ".join(format_carrier(part) for part in decl.parts)
    if isinstance(decl, IntervalDecl):
        opening = "[" if decl.low_closed else "("
        if decl.high is None:
            return f"{opening}{format_expression(decl.low)}, inf)"
        closing = "]" if decl.high_closed else ")"
        return f"{opening}{format_expression(decl.low)}, {format_expression(decl.high)}{closing}"
    if isinstance(decl, FiniteDecl):
        return "{" + ", ".join(format_expression(value) for value in decl.values) + "}"
    return f"{{{format_expression(decl.expression)} : {decl.variable} >= {decl.start}}}"


def format_space_spec(spec: SpaceSpec) -> str:
    lines = [f"name: {spec.name}"]
    if spec.carrier is not None:
        lines.append(f"carrier: {format_carrier(spec.carrier)}")
    claims = []
    if spec.claimed_v is not None:
        claims.append(f"v={spec.claimed_v}")
    if spec.claimed_s is not None:
        claims.append(f"s={format_scalar(spec.claimed_s)}")
    claims.append(spec.completeness_note)
    lines.append("claims: " + " ".join(claims))
    if spec.sample is not None:
        lines.append(f"sample: {spec.sample}")
    if spec.note:
        lines.append(f"note: {spec.note}")
    lines.extend(format_clause(clause) for clause in spec.clauses)
    return "\n".join(lines) + "\n"


def format_map_spec(spec: MapSpec) -> str:
    lines = [f"name: {spec.name}"]
    if spec.note:
        lines.append(f"note: {spec.note}")
    lines.extend(format_clause(clause) for clause in spec.clauses)
    return "\n".join(lines) + "\n"


# Lint and assembly


def _holds(condition: Condition, env: Dict[str, Optional[Fraction]]) -> bool:
    try:
        return evaluate_condition(condition, env)
    except (DslEvaluationError, _ZeroDivision):
        return False


def lint_overlaps(spec: Union[SpaceSpec, MapSpec], sample: Iterable[Point]) -> List[Tuple[int, int, Tuple[Point, ...]]]:
    """
    Report clause pairs whose conditions both hold somewhere on the sample.

    ``otherwise`` never counts as an overlap. Each pair is reported once with
    its first witness.
    """
    points = list(sample)
    if isinstance(spec, SpaceSpec):
        cases = [((p, q), _env_for(p, q)) for p in points for q in points]
    else:
        cases = [((p,), _env_for(p)) for p in points]
    guarded = [(i, clause) for i, clause in enumerate(spec.clauses) if not isinstance(clause.condition, Otherwise)]
    found: Dict[Tuple[int, int], Tuple[Point, ...]] = {}
    for witness, env in cases:
        holding = [i for i, clause in guarded if _holds(clause.condition, env)]
        for a_index, first in enumerate(holding):
            for second in holding[a_index + 1:]:
                found.setdefault((first, second), witness)
    overlaps = [(i, j, witness) for (i, j), witness in sorted(found.items())]
    for i, j, witness in overlaps:
        logger.warning(
            "%s: clauses %d and %d overlap at (%s)",
            spec.name,
            i + 1,
            j + 1,
            ", ".join(str(point) for point in witness),
        )
    return overlaps


def build_space(spec: SpaceSpec) -> GeneratedSpace:
    """
    Turn a parsed space file into a ``GeneratedSpace``.

    When a sample is declared every sample pair must match a clause.
    """
    if spec.carrier is None:
        raise SpaceError(f"space '{spec.name}' declares no carrier")
    space = GeneratedSpace(
        name=spec.name,
        carrier=build_carrier(spec.carrier),
        rule=lambda p, q: eval_distance(spec, p, q),
        completeness_note=spec.completeness_note,
        claimed_v=spec.claimed_v,
        claimed_s=spec.claimed_s,
        default_selector=spec.sample,
    )
    if spec.sample is not None:
        sample = select_points(space, spec.sample)
        for p in sample:
            for q in sample:
                eval_distance(spec, p, q)
        lint_overlaps(spec, sample)
    logger.debug("Built space %s over %s", spec.name, space.carrier)
    return space


def build_map(spec: MapSpec, space: GeneratedSpace, sample: Optional[Iterable[Point]] = None) -> SelfMap:
    selfmap = SelfMap.from_values(spec.name, space.carrier, lambda p: eval_map_value(spec, p))
    points = list(sample) if sample is not None else (
        select_points(space, space.default_selector) if space.default_selector is not None else []
    )
    for point in points:
        selfmap.apply(point)
    if points:
        lint_overlaps(spec, points)
    return selfmap
