"""
Shipped examples and their machine-checkable claims.

An entry is three files in the corpus directory: ``<name>.space`` and
``<name>.map`` in the piecewise language, and ``<name>.claims.json`` listing
the claims with their scopes and expected outcomes.
"""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from bvslab.axioms import BvsParams, check_bvs
from bvslab.contraction import (
    ContractionVerdict,
    ReichCoefficients,
    check_banach_contractive,
    check_ciric_max,
    check_kannan,
    check_reich,
)
from bvslab.dsl import MapSpec, SpaceSpec, build_map, build_space, parse_map_spec, parse_space_spec
from bvslab.errors import BvsError, ClaimFormatError, UnknownExample
from bvslab.picard import (
    DEFAULT_EPSILONS,
    FixedPoint,
    Cycle,
    check_suzuki,
    detect_fixed_points,
    iterate,
    verify_sn_strict_decrease,
)
from bvslab.report import Report, format_value
from bvslab.scalar import format_scalar, parse_scalar
from bvslab.space import GeneratedSpace, Point, Selector, SelfMap, parse_selector, select_points, truncate

logger = logging.getLogger("bvslab.corpus")

CLAIMS_SUFFIX = ".claims.json"
EXPECTATIONS = ("holds", "refuted")


def default_corpus_dir() -> str:
    configured = os.getenv("BVSLAB_CORPUS_DIR")
    if configured:
        return configured
    return os.path.join(os.path.dirname(os.path.dirname(os.path.realpath(__file__))), "corpus")


def shipped_names(corpus_dir: Optional[str] = None) -> List[str]:
    directory = corpus_dir or default_corpus_dir()
    if not os.path.isdir(directory):
        return []
    return sorted(file[: -len(CLAIMS_SUFFIX)] for file in os.listdir(directory) if file.endswith(CLAIMS_SUFFIX))


@dataclass(frozen=True)
class Claim:
    kind: str
    params: Dict[str, Any] = field(default_factory=dict, compare=False)
    scope: Optional[Selector] = None
    expect: str = "holds"
    witness: Dict[str, str] = field(default_factory=dict, compare=False)

    def describe(self) -> str:
        shown = " ".join(f"{key}={format_value(value)}" for key, value in self.params.items())
        return f"{self.kind} {shown}".strip()


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    space_spec: SpaceSpec
    map_spec: MapSpec
    space: GeneratedSpace = field(compare=False)
    selfmap: SelfMap = field(compare=False)
    claims: Tuple[Claim, ...]
    default_truncation: Optional[Selector] = None


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as file:
        return file.read()


def _parse_claim(raw: Dict[str, Any], position: int) -> Claim:
    if not isinstance(raw, dict) or "kind" not in raw:
        raise ClaimFormatError(f"claim #{position} must be an object with a 'kind'")
    expect = raw.get("expect", "holds")
    if expect not in EXPECTATIONS:
        raise ClaimFormatError(f"claim #{position}: expect must be one of {', '.join(EXPECTATIONS)}")
    if raw["kind"] not in CHECKERS:
        raise ClaimFormatError(f"claim #{position}: unknown kind '{raw['kind']}'")
    scope = parse_selector(raw["scope"]) if raw.get("scope") else None
    witness = {key: str(value) for key, value in raw.get("witness", {}).items()}
    return Claim(kind=raw["kind"], params=dict(raw.get("params", {})), scope=scope, expect=expect, witness=witness)


def load_corpus(name: str, corpus_dir: Optional[str] = None) -> CorpusEntry:
    """
    Load a shipped entry by name, or a user entry from a ``.claims.json`` path.

    :raises UnknownExample: when the name is neither.
    """
    directory = corpus_dir or default_corpus_dir()
    shipped = os.path.join(directory, name + CLAIMS_SUFFIX)
    if os.path.isfile(shipped):
        path = shipped
    elif name.endswith(CLAIMS_SUFFIX) and os.path.isfile(name):
        path = name
    else:
        raise UnknownExample(name)
    base = os.path.dirname(os.path.realpath(path))
    try:
        document = json.loads(_read(path))
    except json.JSONDecodeError as error:
        raise ClaimFormatError(f"{path}: {error}") from None
    for key in ("space", "map", "claims"):
        if key not in document:
            raise ClaimFormatError(f"{path}: missing '{key}'")
    space_spec = parse_space_spec(_read(os.path.join(base, document["space"])))
    map_spec = parse_map_spec(_read(os.path.join(base, document["map"])))
    space = build_space(space_spec)
    selfmap = build_map(map_spec, space)
    claims = tuple(_parse_claim(raw, i) for i, raw in enumerate(document["claims"], start=1))
    entry_name = document.get("name", os.path.basename(path)[: -len(CLAIMS_SUFFIX)])
    logger.info("Loaded corpus entry '%s' with %d claim(s)", entry_name, len(claims))
    return CorpusEntry(
        name=entry_name,
        space_spec=space_spec,
        map_spec=map_spec,
        space=space,
        selfmap=selfmap,
        claims=claims,
        default_truncation=space_spec.sample,
    )


# Each checker returns whether the statement holds and the values to report.
CheckResult = Tuple[bool, Dict[str, Any]]


def _sample(entry: CorpusEntry, claim: Claim) -> List[Point]:
    selector = claim.scope or entry.default_truncation
    if selector is None:
        raise ClaimFormatError(f"{entry.name}: claim '{claim.kind}' has no scope and the space no sample")
    return select_points(entry.space, selector)


def _point(entry: CorpusEntry, text: Any) -> Point:
    return entry.space.point_for_value(parse_scalar(str(text)))


def _contraction_details(verdict: ContractionVerdict) -> Dict[str, Any]:
    details: Dict[str, Any] = {"outcome": verdict.outcome, "pairs": verdict.pairs_checked}
    if verdict.witness is not None:
        details.update(x=verdict.witness.x, y=verdict.witness.y, lhs=verdict.witness.lhs, rhs=verdict.witness.rhs)
    return details


def _axiom_class(entry: CorpusEntry, claim: Claim) -> CheckResult:
    params = BvsParams(int(claim.params["v"]), parse_scalar(str(claim.params["s"])))
    verdict = check_bvs(truncate(entry.space, _sample(entry, claim)), params)
    details: Dict[str, Any] = {"outcome": verdict.outcome}
    if verdict.witness is not None:
        w = verdict.witness
        details.update(x=w.x, y=w.y, interior=w.interior, lhs=w.lhs, rhs=w.rhs)
    return verdict.passed, details


def _not_banach(entry: CorpusEntry, claim: Claim) -> CheckResult:
    verdict = check_banach_contractive(entry.space, entry.selfmap, _sample(entry, claim))
    details = _contraction_details(verdict)
    if verdict.passed:
        return False, details
    expected = claim.params.get("witness")
    if expected is not None:
        pair = (verdict.witness.x, verdict.witness.y)
        if pair != (_point(entry, expected[0]), _point(entry, expected[1])):
            return False, details
    return True, details


def _reich(entry: CorpusEntry, claim: Claim) -> CheckResult:
    coeffs = ReichCoefficients(*(parse_scalar(str(claim.params[key])) for key in ("a", "b", "c")))
    verdict = check_reich(entry.space, entry.selfmap, coeffs, _sample(entry, claim))
    return verdict.passed, _contraction_details(verdict)


def _ciric(entry: CorpusEntry, claim: Claim) -> CheckResult:
    verdict = check_ciric_max(entry.space, entry.selfmap, _sample(entry, claim))
    return verdict.passed, _contraction_details(verdict)


def _kannan(entry: CorpusEntry, claim: Claim) -> CheckResult:
    b, c = (parse_scalar(str(claim.params[key])) for key in ("b", "c"))
    verdict = check_kannan(entry.space, entry.selfmap, b, c, _sample(entry, claim))
    return verdict.passed, _contraction_details(verdict)


def _fixed_point_set(entry: CorpusEntry, claim: Claim) -> CheckResult:
    found = detect_fixed_points(entry.space, entry.selfmap, _sample(entry, claim))
    expected = {_point(entry, value) for value in claim.params.get("points", [])}
    return set(found) == expected, {"fixed": found}


def _no_fixed_point(entry: CorpusEntry, claim: Claim) -> CheckResult:
    found = detect_fixed_points(entry.space, entry.selfmap, _sample(entry, claim))
    return not found, {"fixed": found}


def _orbit(entry: CorpusEntry, claim: Claim):
    start = _point(entry, claim.params["start"])
    return iterate(entry.space, entry.selfmap, start, int(claim.params.get("budget", 40)))


def _status_text(orbit) -> str:
    if isinstance(orbit.status, FixedPoint):
        return "fixed-point"
    if isinstance(orbit.status, Cycle):
        return "cycle"
    return "budget-exhausted"


def _picard_orbit(entry: CorpusEntry, claim: Claim) -> CheckResult:
    orbit = _orbit(entry, claim)
    details: Dict[str, Any] = {"status": _status_text(orbit), "points": orbit.points, "s": orbit.s_seq}
    holds = _status_text(orbit) == claim.params.get("status", _status_text(orbit))
    if "points" in claim.params:
        holds = holds and [p.value for p in orbit.points] == [parse_scalar(str(v)) for v in claim.params["points"]]
    if "index" in claim.params and isinstance(orbit.status, FixedPoint):
        holds = holds and orbit.status.index == int(claim.params["index"])
    return holds, details


def _s_decreasing(entry: CorpusEntry, claim: Claim) -> CheckResult:
    verdict = verify_sn_strict_decrease(_orbit(entry, claim))
    return verdict.passed, {"outcome": verdict.outcome, "s": verdict.values, "index": verdict.index}


def suzuki_factor(choice: Any, space: GeneratedSpace, s: Optional[Fraction] = None) -> Fraction:
    """``one`` gives 1, ``s2`` gives s squared (from ``s`` or the space's claim), else a rational."""
    text = str(choice)
    if text == "one":
        return Fraction(1)
    if text == "s2":
        value = s if s is not None else space.claimed_s
        if value is None:
            raise ClaimFormatError(f"factor s2 needs an s; space '{space.name}' claims none")
        return value * value
    return parse_scalar(text)


def _suzuki(entry: CorpusEntry, claim: Claim) -> CheckResult:
    orbit = _orbit(entry, claim)
    factor = suzuki_factor(claim.params.get("factor", "s2"), entry.space)
    eps = [parse_scalar(str(e)) for e in claim.params.get("eps", [])] or list(DEFAULT_EPSILONS)
    findings = check_suzuki(orbit, factor, eps)
    details: Dict[str, Any] = {"factor": factor, "horizon": findings[0].horizon}
    for finding in findings:
        key = f"eps[{format_scalar(finding.epsilon)}]"
        if finding.supported:
            details[key] = f"supported delta={format_scalar(finding.result.delta)} N={finding.result.start_index}"
        else:
            details[key] = f"refuted {len(finding.result.witnesses)} candidate(s)"
    return all(finding.supported for finding in findings), details


CHECKERS: Dict[str, Callable[[CorpusEntry, Claim], CheckResult]] = {
    "axiom-class": _axiom_class,
    "not-banach": _not_banach,
    "reich": _reich,
    "ciric-max": _ciric,
    "kannan": _kannan,
    "fixed-point-set": _fixed_point_set,
    "no-fixed-point": _no_fixed_point,
    "picard-orbit": _picard_orbit,
    "s-decreasing": _s_decreasing,
    "suzuki": _suzuki,
}


@dataclass(frozen=True)
class ClaimResult:
    claim: Claim
    passed: bool
    holds: Optional[bool]
    details: Dict[str, Any]
    runtime: float
    error: Optional[str] = None


@dataclass(frozen=True)
class CorpusReport:
    name: str
    results: Tuple[ClaimResult, ...]

    @property
    def failures(self) -> int:
        return sum(1 for result in self.results if not result.passed)

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _witness_matches(claim: Claim, details: Dict[str, Any]) -> bool:
    return all(format_value(details.get(key)) == value for key, value in claim.witness.items())


def evaluate_claim(entry: CorpusEntry, claim: Claim) -> ClaimResult:
    began = time.perf_counter()
    try:
        holds, details = CHECKERS[claim.kind](entry, claim)
    except BvsError as error:
        logger.error("%s: claim '%s' raised %s: %s", entry.name, claim.kind, type(error).__name__, error)
        return ClaimResult(claim, False, None, {}, time.perf_counter() - began, f"{type(error).__name__}: {error}")
    passed = holds == (claim.expect == "holds") and _witness_matches(claim, details)
    logger.info("%s: %s -> %s", entry.name, claim.describe(), "pass" if passed else "FAIL")
    return ClaimResult(claim, passed, holds, details, time.perf_counter() - began)


def evaluate_claims(entry: CorpusEntry) -> CorpusReport:
    return CorpusReport(entry.name, tuple(evaluate_claim(entry, claim) for claim in entry.claims))


def write_corpus_report(reports: Sequence[CorpusReport], report: Report) -> None:
    total = failed = 0
    for corpus_report in reports:
        for number, result in enumerate(corpus_report.results, start=1):
            claim = result.claim
            total += 1
            failed += not result.passed
            scope = str(claim.scope) if claim.scope is not None else "default sample"
            verdict = result.error or ("holds" if result.holds else "refuted")
            text = (
                f"{corpus_report.name} #{number} {claim.describe()} on {scope} (on sample): "
                f"{verdict}, expected {claim.expect} ({result.runtime:.3f}s)"
            )
            report.status(result.passed, text)
            for key, value in result.details.items():
                report.line(f"    {key} = {format_value(value)}")
            prefix = f"{corpus_report.name}.{number}"
            report.record(f"{prefix}.kind", claim.kind)
            report.record(f"{prefix}.expect", claim.expect)
            report.record(f"{prefix}.result", "pass" if result.passed else "fail")
            for key, value in result.details.items():
                report.record(f"{prefix}.{key}", value)
            if result.error:
                report.record(f"{prefix}.error", result.error)
    report.line("")
    report.line(f"{total - failed} of {total} claim(s) passed")
    report.record("summary.total", total)
    report.record("summary.passed", total - failed)
    report.record("summary.failed", failed)
