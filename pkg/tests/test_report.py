import json
import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from qmcred.report import Claim, Report

finite = st.floats(-1e6, 1e6, allow_nan=False)


@given(finite, finite, st.sampled_from(["<=", "=", ">="]), st.floats(0, 1))
def test_pass_iff_relation_holds(lhs, rhs, rel, tol):
    c = Claim("x", "", lhs, rhs, rel, tol, "exact", "anchor")
    # stay clear of the boundary, where the two forms round differently
    assume(abs(abs(lhs - rhs) - tol) > 1e-9)
    holds = {"<=": lhs <= rhs + tol, ">=": lhs >= rhs - tol, "=": abs(lhs - rhs) <= tol}[rel]
    assert c.passed == holds


def test_nan_fails():
    assert not Claim("x", "", math.nan, 1.0, "<=", 1e-9, "exact", "a").passed


def test_rejects_unknown_labels():
    with pytest.raises(ValueError):
        Claim("x", "", 1, 1, "<", 0, "exact", "a")
    with pytest.raises(ValueError):
        Claim("x", "", 1, 1, "=", 0, "guess", "a")


def test_report_json():
    rep = Report("demo", seed=3)
    rep.add("a", "first", 1.0, 2.0, "<=", 0.0, "exact", "anchor-a")
    rep.add("b", "second", 3.0, 2.0, "<=", 0.0, "brute-force", "anchor-b")
    rep.finish()
    data = json.loads(rep.dumps())
    assert data["pass"] is False
    assert [c["pass"] for c in data["claims"]] == [True, False]
    assert data["claims"][1]["slack"] == -1.0
    assert {"report", "tool_version", "seed", "wall_time"} <= set(data)
    assert rep.worst().id == "b"
    assert "FAIL" in rep.summary()


def test_empty_report_does_not_pass():
    assert not Report("empty").passed
