import json

import pytest

from reesreg.theorems import (CHECK_IDS, FAIL, NA, PASS, TheoremCheck, jsonable, parse_which, run_checks)

# statuses frozen from a full corpus run (seed 0); P = PASS, N = NOT_APPLICABLE
EXPECTED = {
    "adic-m": "PPPNPPPPNNNPPPPN",
    "adic-m2": "PPPNPPPPNNNPPPNP",
    "adic-x": "PPNPNPPPPPPPPNNN",
    "adic-x2-y2": "PPPNPPPPNNNPPNNP",
    "adic-x2-xy": "PPPPNPPPNNNPNNNP",
    "semigroup-345-adic-m": "PPNPNPPPPPPPPPPN",
    "ratliff-rush-x4-x3y-xy3-y4": "PPPNPPPPNNNPPNNP",
    "integral-closure-x3-y3": "PPPNPPPPNNNPPNNP",
    "integral-closure-x2-y3": "PPPNPPPPNNNPPPNP",
    "explicit-x2y2-then-m4": "PPPPNPPPNNNNNPNN",
}
CODE = {PASS: "P", NA: "N", FAIL: "F"}


@pytest.fixture(scope="module")
def results(analyses, corpus):
    return {eid: run_checks(analyses(eid)) for eid in corpus}


def test_check_ids_are_complete():
    assert len(CHECK_IDS) == 16
    assert parse_which("all") == list(CHECK_IDS)
    assert parse_which("T3.2") == ["T3.2.i", "T3.2.ii", "T3.2.iii", "T3.2.iv"]
    assert parse_which("C3.4, L4.2") == ["C3.4", "L4.2"]
    with pytest.raises(KeyError):
        parse_which("X9.9")


@pytest.mark.parametrize("eid", sorted(EXPECTED))
def test_corpus_statuses(results, eid):
    got = "".join(CODE.get(c.status, "?") for c in results[eid])
    assert [c.id for c in results[eid]] == list(CHECK_IDS)
    assert got == EXPECTED[eid]


def test_status_semantics(results):
    for eid, checks in results.items():
        for c in checks:
            assert c.status != FAIL, (eid, c.id, c.lhs, c.rhs)
            if c.status == PASS:
                assert all(v is not False for _, v in c.hypotheses), (eid, c.id)
            if c.status == NA:
                assert c.violated(), (eid, c.id)


def test_named_gates(results):
    by = {eid: {c.id: c for c in cs} for eid, cs in results.items()}
    assert "analytic spread = 1" in by["adic-m"]["L4.2"].violated()
    assert by["adic-m"]["P4.9"].violated() == ["mG != 0"]
    assert "I_n = m I_{n-1} for large n" in by["adic-x2-y2"]["P4.8"].violated()
    assert by["explicit-x2y2-then-m4"]["L4.5"].violated() == ["a* regular on G"]


def test_fiber_regularity_equals_reduction_number(results):
    for eid in ("semigroup-345-adic-m", "adic-x"):
        c = {c.id: c for c in results[eid]}["L4.2"]
        assert c.status == PASS
    c = {c.id: c for c in results["semigroup-345-adic-m"]}["L4.2"]
    assert c.rhs["r_J"] == 1


def test_rees_and_assoc_graded_regularity(analyses):
    for eid, reg in (("adic-m", 0), ("adic-m2", 1), ("ratliff-rush-x4-x3y-xy3-y4", None)):
        E = analyses(eid)
        assert E.reg("R") == E.reg("G")
        if reg is not None:
            assert E.reg("G") == reg


def test_subset_selection(analyses):
    out = run_checks(analyses("adic-m"), ["C3.4", "T3.2.ii"])
    assert [c.id for c in out] == ["T3.2.ii", "C3.4"]


def test_json_encoding():
    c = TheoremCheck("C3.4", PASS, [("h", True)], float("-inf"), float("inf"), 7)
    data = c.to_json()
    assert data["lhs"] is None and data["rhs"] == "+inf"
    json.dumps(data)
    assert jsonable({"a": [1, float("-inf")]}) == {"a": [1, None]}
