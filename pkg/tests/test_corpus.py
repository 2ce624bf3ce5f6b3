import json
import os

import pytest

from bvslab.corpus import (
    evaluate_claims,
    load_corpus,
    shipped_names,
    suzuki_factor,
    write_corpus_report,
)
from bvslab.errors import ClaimFormatError, UnknownExample
from bvslab.report import Report, parse_machine_block
from bvslab.space import IndexRange
from conftest import CORPUS_DIR, F


def write_claims(tmp_path, claims, name="user"):
    path = tmp_path / f"{name}.claims.json"
    document = {
        "name": name,
        "space": os.path.join(CORPUS_DIR, "e4.space"),
        "map": os.path.join(CORPUS_DIR, "e4.map"),
        "claims": claims,
    }
    path.write_text(json.dumps(document), encoding="utf-8")
    return str(path)


def test_shipped_names(corpus_dir):
    assert shipped_names(corpus_dir) == ["e2", "e4", "e6", "e8", "e9"]


def test_entries_carry_their_rules_and_claims(shipped_entries):
    entry = shipped_entries["e2"]
    assert entry.name == "e2"
    assert entry.space.claimed_v == 3
    assert entry.default_truncation == IndexRange(2, 9)
    assert [claim.kind for claim in entry.claims] == ["axiom-class", "not-banach", "no-fixed-point", "reich"]
    assert entry.claims[-1].expect == "refuted"


@pytest.mark.parametrize("name", ["e2", "e4", "e6", "e8", "e9"])
def test_every_shipped_claim_checks_out(shipped_entries, name):
    report = evaluate_claims(shipped_entries[name])
    failed = [(result.claim.describe(), result.error, result.details) for result in report.results if not result.passed]
    assert failed == []
    assert report.passed


def test_refuted_claims_report_their_witness(shipped_entries):
    report = evaluate_claims(shipped_entries["e2"])
    reich = report.results[-1]
    assert reich.holds is False
    assert reich.details["x"].label == "1/2"
    assert reich.details["rhs"] == 1


def test_orbit_claims_report_points_and_s(shipped_entries):
    report = evaluate_claims(shipped_entries["e4"])
    orbit = next(result for result in report.results if result.claim.kind == "picard-orbit")
    assert orbit.details["status"] == "fixed-point"
    assert [point.label for point in orbit.details["points"]] == ["1", "1/2", "0"]
    assert orbit.details["s"] == (7, 1)


def test_unknown_names_are_refused():
    with pytest.raises(UnknownExample):
        load_corpus("nope", CORPUS_DIR)


def test_a_false_user_claim_fails(tmp_path):
    path = write_claims(
        tmp_path,
        [
            {"kind": "fixed-point-set", "params": {"points": ["1"]}},
            {"kind": "no-fixed-point", "expect": "refuted"},
        ],
    )
    report = evaluate_claims(load_corpus(path))
    assert [result.passed for result in report.results] == [False, True]
    assert report.failures == 1


def test_a_wrong_witness_fails_the_claim(tmp_path):
    path = write_claims(
        tmp_path,
        [{"kind": "picard-orbit", "params": {"start": "1", "budget": 10}, "witness": {"s": "7,2"}}],
    )
    [result] = evaluate_claims(load_corpus(path)).results
    assert result.holds
    assert not result.passed


def test_errors_become_failed_results(tmp_path):
    path = write_claims(tmp_path, [{"kind": "picard-orbit", "params": {"start": "-1"}}])
    [result] = evaluate_claims(load_corpus(path)).results
    assert not result.passed
    assert result.error.startswith("PointNotInCarrier")


@pytest.mark.parametrize(
    "claim",
    [
        {"kind": "banach-ish"},
        {"kind": "reich", "expect": "maybe"},
        ["reich"],
    ],
)
def test_malformed_claims_are_refused(tmp_path, claim):
    with pytest.raises(ClaimFormatError):
        load_corpus(write_claims(tmp_path, [claim]))


def test_suzuki_factor_choices(shipped_entries):
    space = shipped_entries["e4"].space
    assert suzuki_factor("one", space) == 1
    assert suzuki_factor("s2", space) == 4
    assert suzuki_factor("s2", space, F(3, 2)) == F(9, 4)
    assert suzuki_factor("3/2", space) == F(3, 2)


def test_report_machine_block_summarises_every_claim(shipped_entries):
    report = Report("corpus")
    write_corpus_report([evaluate_claims(shipped_entries["e4"])], report)
    machine = parse_machine_block(report.render())
    assert machine["e4.1.kind"] == "axiom-class"
    assert machine["e4.4.result"] == "pass"
    assert machine["e4.4.points"] == "1,1/2,0"
    assert machine["e4.4.s"] == "7,1"
    assert (machine["summary.total"], machine["summary.failed"]) == ("6", "0")
