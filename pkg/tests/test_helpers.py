import json
from fractions import Fraction

import pytest

from helpers import reports, validation, workspace
from helpers.fraction_encoder import dumps
from relproj.amod import ModuleInC, ModuleMap
from relproj.calg import AlgebraInC, AlgebraMap
from relproj.cochain_core import Cochain2
from relproj.errors import InputError
from relproj.linedesc import Covering, DescentDatum
from relproj.report import CheckReport

F = Fraction


def test_rationals_are_written_as_strings():
    text = dumps({"b": [F(1, 2), F(3)], "a": F(-2, 4)})
    assert json.loads(text) == {"a": "-1/2", "b": ["1/2", "3"]}
    assert text.index('"a"') < text.index('"b"')


@pytest.mark.parametrize("value, expected", [(3, F(3)), ("3", F(3)), ("-1/2", F(-1, 2)), (" 4/6 ", F(2, 3))])
def test_rational(value, expected):
    assert workspace.rational(value) == expected


@pytest.mark.parametrize("value", [0.5, True, None, "1/0", "x", "1.5", [1]])
def test_rational_rejects(value):
    with pytest.raises(InputError):
        workspace.rational(value, "here")


def test_vector_and_element(Q2):
    assert workspace.vector([1, "1/3"], 2) == (F(1), F(1, 3))
    with pytest.raises(InputError):
        workspace.vector([1], 2)
    assert workspace.element(Q2, 3) == (F(3), F(3))
    assert workspace.element(Q2, [0, 1]) == (F(0), F(1))


def test_check_report_merge():
    first = CheckReport("a", 2, [{"x": 1}], {"one": 1})
    second = CheckReport("b", 3, [], {"two": 2})
    merged = first.merge(second)
    assert merged.name == "a"
    assert merged.checked == 5
    assert not merged.passed
    assert merged.details == {"one": 1, "two": 2}


def test_build_report_and_status():
    good = CheckReport("good", 4)
    bad = CheckReport("bad", 1, ["w"])
    report = reports.build_report("suite", [good, bad], seed=1, samples=2)
    assert not report["passed"]
    assert reports.status_of(report) == reports.VIOLATION
    assert reports.status_of(reports.build_report("suite", [good])) == reports.PASS
    assert "result" not in report


def test_get_response_formats():
    body = reports.build_report("suite", [CheckReport("c", 1)], seed=0, samples=None, result={"x": F(1, 2)})
    response = reports.get_response(body)
    assert response["statusCode"] == 0
    assert json.loads(response["body"])["result"] == {"x": "1/2"}
    text = reports.get_response(body, output_format="text")
    assert text["headers"]["Content-Type"] == "text/plain"
    assert text["body"].splitlines()[-1] == "PASS"
    assert reports.get_response(None, status_code=2)["body"] == ""


def test_labelled_keeps_bare_documents():
    report = CheckReport("axioms")
    assert reports.labelled(report, "document").name == "axioms"
    assert reports.labelled(report, "first").name == "first/axioms"


def test_parse_defaults(make_event):
    parsed = validation.parse(make_event({"builtin": "octonion"}, seed=7))
    assert parsed["seed"] == 7
    assert parsed["format"] == "json"
    assert parsed["document"] == {"builtin": "octonion"}


def test_parse_rejects_unknown_formats(make_event):
    with pytest.raises(InputError):
        validation.parse(make_event(format="yaml"))


def test_load_document_rejects_floats(tmp_path):
    path = tmp_path / "doc.json"
    path.write_text('{"values": [0.5, 1]}')
    with pytest.raises(InputError):
        validation.load_document(str(path))


def test_handle_errors_maps_input_errors(make_event):
    @validation.handle_errors
    def handler(event, context=None):
        raise InputError("bad thing", location="tasks[0]")

    response = handler(make_event())
    assert response["statusCode"] == 2
    assert json.loads(response["body"]) == {"error": "bad thing", "location": "tasks[0]"}


def test_handle_errors_maps_missing_files(make_event, tmp_path):
    @validation.handle_errors
    def handler(event, context=None):
        return reports.get_response({"passed": True})

    response = handler(make_event(file=str(tmp_path / "missing.json")))
    assert response["statusCode"] == 2


def test_handle_errors_maps_bad_json(make_event, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{")

    @validation.handle_errors
    def handler(event, context=None):
        return reports.get_response({"passed": True})

    assert handler(make_event(file=str(path)))["statusCode"] == 2


def test_handle_errors_reports_broken_invariants_as_violations(make_event):
    @validation.handle_errors
    def handler(event, context=None):
        raise ArithmeticError("dual of a line object is not invertible")

    response = handler(make_event(command="proj dualize", seed=3))
    assert response["statusCode"] == 1
    body = json.loads(response["body"])
    assert body["passed"] is False
    assert body["suite"] == "proj dualize"
    assert body["checks"][0]["violations"] == [{"error": "dual of a line object is not invertible", "kind": "ArithmeticError"}]


DOCUMENT = {
    "objects": {
        "A": {"kind": "algebra", "algebra": "product_of_fields", "n": 3},
        "F": {"kind": "cochain", "group": [2], "entries": [[[1], [1], -1]]},
        "C": {"kind": "algebra", "cochain": "F", "carrier": [1, 1], "mult": [[0, 0, [1, 0]], [0, 1, [0, 1]], [1, 0, [0, 1]], [1, 1, [-1, 0]]], "unit": [1, 0]},
        "u": {"kind": "algebra_map", "builtin": "localization", "algebra": "A", "element": [1, 1, 0]},
        "v": {"kind": "algebra_map", "builtin": "localization", "algebra": "A", "element": [0, 1, 1]},
        "cov": {"kind": "covering", "base": "A", "legs": ["u", "v"]},
        "I": {"kind": "module", "module": "ideal", "algebra": "A", "generators": [[1, 0, 0]]},
        "x": {"kind": "module_map", "builtin": "unit_mono", "values": [1, 2]},
        "loop": {"kind": "algebra", "target_of": "loop"},
    },
    "tasks": [
        {"command": "cover", "name": "two charts", "covering": "cov"},
        {"command": "glue", "descent": {"covering": "cov", "transitions": [[0, 1, 2]]}},
    ],
}


@pytest.mark.parametrize(
    "name, cls",
    [
        ("A", AlgebraInC),
        ("F", Cochain2),
        ("C", AlgebraInC),
        ("u", AlgebraMap),
        ("cov", Covering),
        ("I", ModuleInC),
        ("x", ModuleMap),
    ],
)
def test_workspace_builds_objects(name, cls):
    assert isinstance(workspace.from_(DOCUMENT).get(name), cls)


def test_workspace_shares_objects():
    ws = workspace.from_(DOCUMENT)
    assert ws.get("u").source is ws.get("A")
    assert ws.get("cov").base is ws.get("A")
    assert ws.get("ground", kind="algebra") is ws.get("ground", kind="algebra")


def test_workspace_rejects_cycles_and_unknowns():
    ws = workspace.from_(DOCUMENT)
    with pytest.raises(InputError):
        ws.get("loop")
    with pytest.raises(InputError):
        ws.get("nothing")
    with pytest.raises(InputError):
        ws.build({"kind": "widget"})


def test_subjects():
    found = workspace.subjects(DOCUMENT, "covering", "cover")
    assert [s.label for s in found] == ["two charts"]
    glue = workspace.subjects(DOCUMENT, "descent", "glue")
    assert glue[0].label == "tasks[1]"
    assert isinstance(glue[0].object, DescentDatum)
    with pytest.raises(InputError):
        workspace.subjects(DOCUMENT, "algebra", "ideal")


def test_bare_document_is_a_single_task():
    (subject,) = workspace.subjects({"builtin": "octonion"}, "cochain", "axioms")
    assert subject.label == "document"
    assert isinstance(subject.object, Cochain2)


def test_points_from_documents():
    spec = workspace.from_({}).build({"kind": "point", "values": [3, 6]})
    point, report = workspace.verify_spec(spec)
    assert report.passed
    assert workspace.to_point(point)["mono"] == [[F(3)], [F(6)]]
    quotient = workspace.from_({}).build({"kind": "quotient_point", "values": [1, 2]})
    assert quotient.quotient
    with pytest.raises(InputError):
        workspace.from_({}).build({"kind": "quotient_point", "chart": 0, "coords": [1]})
