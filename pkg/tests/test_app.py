import json

import pytest

from app import ROUTES, build_parser, main, to_event


def test_transition_from_the_command_line(capsys):
    status = main(["proj", "transition", "--n", "1", "--from", "0", "--to", "1", "--coords", "2"])
    assert status == 0
    body = json.loads(capsys.readouterr().out)
    assert body["result"]["coords"] == ["1/2"]


def test_flags_before_the_subcommand_are_kept():
    args = build_parser().parse_args(["--seed", "3", "--format", "text", "octonion"])
    event = to_event(args)
    assert event["seed"] == 3
    assert event["format"] == "text"
    assert event["command"] == "octonion"


def test_flags_after_the_subcommand():
    event = to_event(build_parser().parse_args(["axioms", "doc.json", "--samples", "4"]))
    assert event == {
        "command": "axioms",
        "file": "doc.json",
        "seed": None,
        "samples": 4,
        "format": None,
        "params": {},
    }


def test_every_command_is_routed():
    parser = build_parser()
    for argv in (["axioms", "f"], ["proj", "glue", "f"], ["suite", "all"], ["proj", "transition", "f"]):
        assert to_event(parser.parse_args(argv))["command"] in ROUTES


def test_report_written_to_a_file(tmp_path):
    doc = tmp_path / "point.json"
    doc.write_text(json.dumps({"values": [3, 6], "index": 1}))
    out = tmp_path / "report.json"
    assert main(["proj", "chart", str(doc), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["result"]["document"] == {"1": [["1/2"]]}


def test_zero_cochain_entry_exits_with_input_error(tmp_path, capsys):
    doc = tmp_path / "cochain.json"
    doc.write_text(json.dumps({"group": [2], "entries": [[[0], [1], "0"]]}))
    assert main(["axioms", str(doc)]) == 2
    assert json.loads(capsys.readouterr().out)["location"] == "F([0], [1])"


def test_float_literals_are_input_errors(tmp_path):
    doc = tmp_path / "point.json"
    doc.write_text('{"values": [0.5, 1]}')
    assert main(["proj", "verify", str(doc)]) == 2


def test_unknown_subcommand():
    with pytest.raises(SystemExit):
        main(["proj", "nothing"])
