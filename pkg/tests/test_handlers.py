import json

import pytest

import algebra
import axioms
import cover
import glue
import ideal
import line
import localize
import octonion
import proj_chart
import proj_dualize
import proj_fieldcover
import proj_glue
import proj_transition
import proj_verify
import suite_all

Q3_COVER = {
    "A": {"kind": "algebra", "algebra": "product_of_fields", "n": 3},
    "u": {"kind": "algebra_map", "builtin": "localization", "algebra": "A", "element": [1, 1, 0]},
    "v": {"kind": "algebra_map", "builtin": "localization", "algebra": "A", "element": [0, 1, 1]},
    "cov": {"kind": "covering", "base": "A", "legs": ["u", "v"]},
}


def _call(handler, event):
    response = handler(event)
    return response["statusCode"], json.loads(response["body"])


def test_axioms_for_the_octonion_cochain(make_event):
    status, body = _call(axioms.handler, make_event({"builtin": "octonion"}))
    assert status == 0
    checks = {c["name"]: c for c in body["checks"]}
    assert checks["pentagon"]["checked"] == 4096
    assert checks["hexagon"]["checked"] == 512


def test_axioms_reject_a_zero_entry(make_event):
    status, body = _call(axioms.handler, make_event({"group": [2], "entries": [[[1], [1], 0]]}))
    assert status == 2
    assert "F([1], [1])" in body["location"]


def test_axioms_need_a_document(make_event):
    status, body = _call(axioms.handler, make_event())
    assert status == 2
    assert body["errors"]


def test_algebra(make_event):
    status, body = _call(algebra.handler, make_event({"algebra": "octonions"}, samples=20))
    assert status == 0
    result = body["result"]["document"]
    assert result["field_object"] is True
    assert result["maximal_ideals"] == [[0] * 8]
    assert body["samples"] == 20


def test_algebra_rejects_nonpositive_samples(make_event):
    status, _ = _call(algebra.handler, make_event({"algebra": "octonions"}, samples=0))
    assert status == 2


def test_ideal(make_event):
    document = {
        "objects": {"A": Q3_COVER["A"]},
        "tasks": [
            {"command": "ideal", "name": "whole", "algebra": "A", "generators": [[1, 1, 0], [0, 1, 1]]},
            {"command": "ideal", "name": "proper", "algebra": "A", "generators": [[1, 0, 0]]},
        ],
    }
    status, body = _call(ideal.handler, make_event(document))
    assert status == 0
    assert body["result"]["whole"]["whole"] is True
    assert body["result"]["whole"]["partition_of_unity"] is not None
    assert body["result"]["proper"]["dims"] == [1]
    assert body["result"]["proper"]["maximal_ideal_above"] == [2]


def test_ideal_with_generator_outside_identity_degree(make_event):
    status, body = _call(ideal.handler, make_event({"algebra": "octonions", "generators": [[0, 1, 0, 0, 0, 0, 0, 0]]}))
    assert status == 0
    result = body["result"]["document"]
    assert result["whole"] is True
    assert result["dims"] == [1] * 8
    assert result["partition_family"] == [["1"] + ["0"] * 7]
    assert result["partition_of_unity"] is not None
    assert body["checks"][1]["details"]["family"] == "degree_zero_part"


def test_ideal_checks_on_an_odd_generator(exterior):
    checks, result = ideal.ideal_checks(exterior, [(0, 1)])
    assert all(c.passed for c in checks)
    assert result["whole"] is False
    assert result["dims"] == [0, 1]
    assert result["partition_family"] == []
    assert result["partition_of_unity"] is None


def test_localize(make_event):
    document = {
        "objects": {"A": Q3_COVER["A"]},
        "tasks": [{"command": "localize", "algebra": "A", "element": [1, 0, 0]}],
    }
    status, body = _call(localize.handler, make_event(document))
    assert status == 0
    assert body["result"]["tasks[0]"]["dims"] == [1]
    assert body["result"]["tasks[0]"]["exponent"] == 1


def test_cover(make_event):
    document = {"objects": Q3_COVER, "tasks": [{"command": "cover", "covering": "cov"}]}
    status, body = _call(cover.handler, make_event(document))
    assert status == 0
    assert body["checks"][0]["details"]["flat"] == "certified"


def test_cover_missing_a_point(make_event):
    document = {
        "objects": {
            "A": {"kind": "algebra", "algebra": "product_of_fields", "n": 2},
            "u": {"kind": "algebra_map", "builtin": "localization", "algebra": "A", "element": [1, 0]},
        },
        "tasks": [{"command": "cover", "base": "A", "legs": ["u"]}],
    }
    status, body = _call(cover.handler, make_event(document))
    assert status == 1
    assert body["checks"][0]["details"]["jointly_conservative"] is False


def test_glue(make_event):
    document = {
        "objects": Q3_COVER,
        "tasks": [{"command": "glue", "descent": {"covering": "cov", "transitions": [[0, 1, 2]]}, "line": True}],
    }
    status, body = _call(glue.handler, make_event(document))
    assert status == 0
    result = body["result"]["tasks[0]"]
    assert result["module"]["dims"] == [3]
    assert result["line_object"] is True
    assert result["direct_summand"] is True


def test_glue_rejects_a_broken_cocycle(make_event):
    objects = {
        "A": Q3_COVER["A"],
        "u": Q3_COVER["u"],
        "cov": {"kind": "covering", "base": "A", "legs": ["u", "u", "u"]},
    }
    descent = {"covering": "cov", "transitions": [[0, 1, 2], [1, 2, 3], [0, 2, 5]]}
    status, body = _call(glue.handler, make_event({"objects": objects, "tasks": [{"command": "glue", "descent": descent}]}))
    assert status == 2
    assert "cocycle" in body["error"]


def test_line(make_event):
    document = {
        "objects": {
            "odd": {
                "kind": "module",
                "algebra": {"algebra": "ground", "cochain": "super"},
                "carrier": [0, 1],
                "action": [[0, 0, [1]]],
            },
        },
        "tasks": [
            {"command": "line", "name": "regular", "module": {"module": "regular", "algebra": "octonions"}},
            {"command": "line", "name": "odd", "module": "odd"},
        ],
    }
    status, body = _call(line.handler, make_event(document))
    assert status == 1
    assert body["result"]["regular"]["symtrivial"] is True
    assert body["result"]["odd"]["invertible"] is True
    assert body["result"]["odd"]["signature"] == ["-1"]


def test_proj_verify(make_event):
    status, body = _call(proj_verify.handler, make_event({"values": [1, 2]}))
    assert status == 0
    assert body["result"]["document"]["charts"] == [0, 1]


def test_proj_verify_zero_vector(make_event):
    status, body = _call(proj_verify.handler, make_event({"values": [0, 0]}))
    assert status == 1
    assert body["result"]["document"] is None
    assert body["checks"][0]["violations"][0]["condition"] == "mono"


def test_proj_chart(make_event):
    status, body = _call(proj_chart.handler, make_event({"values": [3, 6], "index": 0}))
    assert status == 0
    assert body["result"]["document"] == {"0": [["2"]]}


@pytest.mark.parametrize(
    "params, expected",
    [
        ({"n": 1, "from": 0, "to": 1, "coords": ["2"]}, ["1/2"]),
        ({"n": 2, "from": 0, "to": 2, "coords": ["3", "6"]}, ["1/6", "1/2"]),
    ],
)
def test_proj_transition(make_event, params, expected):
    status, body = _call(proj_transition.handler, make_event(params=params))
    assert status == 0
    assert body["result"]["coords"] == expected


def test_proj_transition_missing_params(make_event):
    status, body = _call(proj_transition.handler, make_event(params={"n": 1, "from": 0}))
    assert status == 2
    assert "Missing param: 'to'" in body["errors"]


def test_proj_transition_zero_pivot(make_event):
    status, _ = _call(proj_transition.handler, make_event(params={"n": 1, "from": 0, "to": 1, "coords": ["0"]}))
    assert status == 2


def test_proj_dualize(make_event):
    status, body = _call(proj_dualize.handler, make_event({"kind": "quotient_point", "values": [1, 2]}))
    assert status == 0
    assert "mono" in body["result"]["document"]


def test_proj_glue(make_event):
    objects = {
        "A": {"kind": "algebra", "algebra": "product_of_fields", "n": 2},
        "p0": {"kind": "algebra_map", "builtin": "projection", "algebra": "A", "index": 0},
        "p1": {"kind": "algebra_map", "builtin": "projection", "algebra": "A", "index": 1},
        "cov": {"kind": "covering", "base": "A", "legs": ["p0", "p1"]},
        "x0": {"kind": "point", "algebra": {"target_of": "p0"}, "chart": 0, "coords": [2]},
        "x1": {"kind": "point", "algebra": {"target_of": "p1"}, "chart": 0, "coords": [3]},
    }
    task = {"command": "proj glue", "covering": "cov", "points": ["x0", "x1"]}
    status, body = _call(proj_glue.handler, make_event({"objects": objects, "tasks": [task]}))
    assert status == 0
    assert body["result"]["tasks[0]"]["n"] == 1


def test_proj_fieldcover(make_event):
    status, body = _call(proj_fieldcover.handler, make_event({"algebra": "octonions", "n": 2}, samples=5))
    assert status == 0
    assert body["checks"][0]["checked"] == 5


def test_proj_fieldcover_needs_a_field(make_event):
    status, _ = _call(proj_fieldcover.handler, make_event({"algebra": "product_of_fields", "n": 2}))
    assert status == 2


def test_text_format(make_event):
    response = proj_verify.handler(make_event({"values": [1, 2]}, format="text"))
    assert response["statusCode"] == 0
    assert response["body"].splitlines()[-1] == "PASS"


def test_octonion_suite(make_event):
    status, body = _call(octonion.handler, make_event(samples=10))
    assert status == 0
    assert all(c["passed"] for c in body["checks"])


@pytest.mark.slow
def test_suite_all(make_event):
    status, body = _call(suite_all.handler, make_event(samples=3))
    assert status == 0, [c for c in body["checks"] if not c["passed"]]
