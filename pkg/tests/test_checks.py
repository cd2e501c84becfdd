"""Tests for the check registry and the suite runner."""
import pytest
from mpmath import mpf
from tvk._checks import (
    CHECKS,
    EXIT_CODES,
    Check,
    CheckReport,
    Outcome,
    UnknownCheckError,
    Verifier,
    _adjudicate,
    available_tags,
    exit_code,
    run_check,
    summarize,
)

pytestmark = pytest.mark.numeric

_p = pytest.param

REQUIRED_CHECKS = {
    "expansion-golden",
    "shuffle-examples",
    "route-agreement",
    "duality-theorem",
    "duality-example",
    "oracle-duality",
    "lambda-quadrature",
    "variant-adjudication",
}


def report(status):
    return CheckReport("id", "description", "statement", {}, status)


def test_registry_has_the_required_checks():
    assert REQUIRED_CHECKS <= set(CHECKS)
    assert {"symbolic", "numeric", "oracle", "property", "variant"} == set(
        available_tags()
    )


@pytest.mark.parametrize(
    "check_id",
    [
        "expansion-golden",
        "ones-lemma",
        "duality-involution",
        "shuffle-mass",
        "ipower-invariant",
    ],
)
def test_symbolic_checks_pass(context, check_id):
    verifier = Verifier(context)
    for params in CHECKS[check_id].cases(4):
        assert verifier.run_check(check_id, params).status == "pass", params


@pytest.mark.parametrize(
    ("check_id", "params"),
    [
        _p("shuffle-examples", {"case": "T2squared"}, id="T2 squared"),
        _p("shuffle-examples", {"case": "T2T3"}, id="T2 T3"),
        _p("known-evaluations", {"s": 2}, id="lambda(2;2)"),
        _p("route-agreement", {"kind": "one_two", "r": 2, "j": 1, "s": 2}, id="one two"),
        _p("sum-relations", {"kind": "me1", "r": 2, "k": 2, "s": 3}, id="me1"),
        _p("shuffle-homomorphism", {"u": [2], "v": [3]}, id="at one"),
        _p("duality-example", {"index": [2, 2], "p": 1, "q": 2}, id="duality example"),
        _p("duality-theorem", {"index": [3], "p": 1, "q": 1}, id="duality of three"),
        _p("constants", {"index": [2]}, id="catalan"),
        _p("depth-one", {"k": 5}, id="beta(5)"),
    ],
)
def test_numeric_checks_pass(context, check_id, params):
    result = run_check(check_id, params, context)

    assert result.status == "pass", result.to_json()
    assert float(result.abs_err) <= float(result.tol)


@pytest.mark.parametrize(
    ("params", "winner", "point"),
    [
        _p(
            {"object": "binomial", "weight_max": 3},
            "corrected",
            "r=2, s=2",
            id="binomial",
        ),
        _p(
            {"object": "circled-product", "weight_max": 4},
            "insertion",
            "k=(2,2), p=1, q=2",
            id="circled product",
        ),
    ],
)
def test_variant_adjudication_names_the_winner(context, params, winner, point):
    result = run_check("variant-adjudication", params, context)

    assert result.status == "ambiguous"
    assert result.winner == winner
    assert result.ok
    assert f"{point}: {winner}" in result.message


def vote(*passing, names=("printed", "corrected")):
    held = Outcome("1", "1", mpf(0), mpf("1e-10"))
    broken = Outcome("1", "2", mpf(1), mpf("1e-10"))
    return {name: held if name in passing else broken for name in names}


def test_a_variant_must_hold_at_every_separating_point():
    votes = [("r=2", vote("corrected")), ("r=3", vote("corrected"))]

    outcome = _adjudicate(votes)

    assert outcome.winner == "corrected"
    assert outcome.message == "r=2: corrected; r=3: corrected"


@pytest.mark.parametrize(
    "votes",
    [
        _p([("r=2", vote("corrected")), ("r=3", vote("printed"))], id="split"),
        _p([("r=2", vote("corrected", "printed"))], id="both hold"),
        _p([("r=2", vote())], id="neither holds"),
    ],
)
def test_inconsistent_votes_name_no_winner(votes):
    outcome = _adjudicate(votes)

    assert outcome.winner is None
    assert not outcome.passed
    assert outcome.message.startswith("no consistent variant")


def test_no_separating_point_is_a_failure():
    outcome = _adjudicate([])

    assert outcome.winner is None
    assert not outcome.passed
    assert outcome.message == "no point separates the variants"


def test_depth_one_holds_at_the_default_precision():
    result = run_check("depth-one", {"k": 3})

    assert result.status == "pass", result.to_json()


def test_duality_example_shows_both_sides_and_the_closed_form(context):
    result = run_check("duality-example", {"index": [2, 2], "p": 1, "q": 2}, context)

    statement, expected = result.message.split(" = ")

    assert result.status == "pass"
    assert statement == "-i(2T̃(3)² - 3T̃(2)T̃(4))"
    assert abs(complex(result.lhs) - complex(result.rhs)) < 1e-12
    assert abs(complex(expected) - complex(result.rhs)) < 1e-12


def test_unknown_check_is_rejected(context):
    with pytest.raises(UnknownCheckError):
        run_check("no-such-check", {}, context)


def test_failures_inside_a_check_become_error_reports(context, monkeypatch):
    def _explode(params, ctx):
        raise ArithmeticError("series diverged")

    check = Check(
        "explode", "always fails", "1 = 2", ("symbolic",), lambda _: [{}], _explode
    )
    monkeypatch.setitem(CHECKS, "explode", check)

    reports, summary = Verifier(context).run_suite(check_ids=["explode"])

    assert [r.status for r in reports] == ["error"]
    assert reports[0].message == "series diverged"
    assert summary["exit_code"] == EXIT_CODES["numeric"]


def test_plan_filters_by_tag_and_weight(context):
    verifier = Verifier(context)

    cases = verifier.plan(tags=["variant"], weight_max=3)
    ones = verifier.plan(check_ids=["ones-lemma"], weight_max=3)

    assert {check_id for check_id, _ in cases} == {"variant-adjudication"}
    assert all(params["object"] == "binomial" for _, params in cases)
    assert ones == [("ones-lemma", {"r": r}) for r in (1, 2, 3)]


def test_parallel_suite_matches_the_serial_one(context):
    check_ids = ["duality-involution", "shuffle-mass"]
    verifier = Verifier(context)

    serial, _ = verifier.run_suite(check_ids=check_ids)
    parallel, summary = verifier.run_suite(check_ids=check_ids, jobs=2)

    assert [r.status for r in parallel] == [r.status for r in serial]
    assert summary["pass"] == 2


@pytest.mark.parametrize(
    ("statuses", "expected"),
    [
        _p(["pass", "ambiguous"], 0, id="all good"),
        _p(["pass", "error"], 3, id="numerical error"),
        _p(["error", "fail"], 1, id="failure wins"),
        _p([], 0, id="nothing to run"),
    ],
)
def test_exit_codes(statuses, expected):
    reports = list(map(report, statuses))

    assert exit_code(reports) == expected
    assert summarize(reports)["total"] == len(statuses)


def test_symbolic_outcome():
    assert Outcome.symbolic([1], [1]).passed
    assert not Outcome.symbolic([1], [2]).passed
