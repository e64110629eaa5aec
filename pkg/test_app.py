"""
End-to-end runs of the command line tool on the bundled fixtures, plus problem files and settings.
"""
import io
import json

import pytest
import yaml

from app import apply_ring_overrides, main
from src.lifting.engine import lift
from src.modules.dg_module import same_module
from src.utils.config import field_spec, get_settings
from src.utils.exceptions import ProblemFileError
from src.utils.problem_loader import dump_problem, fixture_data, load_fixture, load_problem, parse_window
from src.utils.reports import format_invariants, homology_table, to_json
from src.ring.truncated_ring import TruncatedRing


@pytest.mark.parametrize("argv,code", [
    (["check", "--fixture", "three_step"], 0),
    (["lift", "--fixture", "b_over_b"], 0),
    (["lift", "--fixture", "three_step"], 0),
    (["lift", "--fixture", "unliftable"], 2),
    (["ext", "--fixture", "b_over_b", "--degree", "2"], 0),
    (["ext", "--fixture", "three_step", "--degree", "2"], 2),
    (["homology", "--fixture", "three_step", "--window", "0..2"], 0),
    (["unique", "--fixture", "free_pair"], 0),
    (["unique", "--fixture", "three_step", "--choices", "1:2"], 2),
    (["lift-iterated", "--fixture", "koszul_two"], 0),
    (["lift-iterated", "--fixture", "residue_field"], 2),
    (["semidualizing", "--fixture", "koszul_two"], 0),
    (["resolve", "--fixture", "residue_field"], 0),
    (["lift", "--fixture", "no_such_fixture"], 1),
])
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code
    assert capsys.readouterr().out


def test_lift_report(tmp_path):
    out = tmp_path / "lift.json"
    transcript = tmp_path / "lift.jsonl"
    assert main(["lift", "--fixture", "three_step", "--json", str(out), "--transcript", str(transcript)]) == 0
    report = json.loads(out.read_text())
    assert report["command"] == "lift"
    assert report["exit_code"] == 0
    assert report["stages"] == 1
    assert report["quasilift"] is True
    assert report["lifted"]["alpha"] == {"2": [{"coeff": [0, 1], "gamma": [0, 0], "target": 1}]}
    records = [json.loads(line) for line in transcript.read_text().splitlines()]
    assert [r["n"] for r in records] == [0, 1]


def test_obstruction_report(tmp_path):
    out = tmp_path / "obstruction.json"
    transcript = tmp_path / "obstruction.jsonl"
    assert main(["lift", "--fixture", "unliftable", "--json", str(out), "--transcript", str(transcript)]) == 2
    report = json.loads(out.read_text())
    assert report["error"] == "ObstructionNonzero"
    assert report["stage"] == 2
    records = [json.loads(line) for line in transcript.read_text().splitlines()]
    assert (records[-1]["n"], records[-1]["solved"], records[-1]["params"]) == (2, False, [])


def test_json_output_is_stable(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    main(["resolve", "--fixture", "residue_field", "--json", str(first)])
    main(["resolve", "--fixture", "residue_field", "--json", str(second)])
    assert first.read_text() == second.read_text()
    report = json.loads(first.read_text())
    assert report["betti"] == {"0": 1, "2": 1, "4": 1}
    assert report["complete"] is False


def test_problem_file_from_disk(tmp_path):
    path = tmp_path / "problem.yaml"
    path.write_text(yaml.safe_dump({
        "ring": {"field": {"Fp": 2}, "precision": 2},
        "algebra": {"koszul": ["t"]},
        "module": {"form": "block", "semibasis": {0: 1, 2: 1}, "delta": {"2:0": [{"coeff": "t", "target": "0:0"}]}},
    }))
    assert main(["lift", str(path)]) == 2
    assert main(["lift", str(tmp_path / "missing.yaml")]) == 1


def test_problem_from_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(yaml.safe_dump(fixture_data("b_over_b"))))
    assert main(["homology", "-"]) == 0
    assert "degree" in capsys.readouterr().out


def test_ring_override(tmp_path):
    out = tmp_path / "z3.json"
    assert main(["lift", "--fixture", "b_over_b", "--ring", "Z3", "--precision", "3", "--json", str(out)]) == 0
    assert json.loads(out.read_text())["lifted"]["semibasis"] == {"0": 1}
    assert main(["lift", "--fixture", "three_step", "--ring", "F4"]) == 1


def test_dumped_lift_reloads(tmp_path):
    problem = load_fixture("three_step")
    result = lift(problem.module)
    data = json.loads(json.dumps(dump_problem(problem, result.lifted, 0)))
    reloaded = load_problem(yaml.safe_load(yaml.safe_dump(data)))
    assert same_module(reloaded.module, result.lifted)
    assert reloaded.levels["module"] == 0


@pytest.mark.parametrize("data,witness", [
    ({"algebra": {"koszul": ["t"]}, "module": {"semibasis": {0: 1}}}, "ring"),
    ({"ring": {"field": "Q", "precision": 2}, "algebra": {"koszul": ["t"]}}, "module"),
    ({"ring": {"field": "Q", "precision": 2}, "algebra": {"koszul": ["t"]},
      "module": {"semibasis": {0: 1, 1: 1}, "alpha": {"1": [{"target": "nope"}]}}}, "module.alpha.1[0].target"),
    ({"ring": {"field": "Q", "precision": 2}, "algebra": {"koszul": []},
      "module": {"form": "block", "semibasis": {0: 1}, "over": 0}}, "module.over"),
    ({"ring": {"field": "Q", "precision": 2}, "algebra": {"koszul": ["t"]},
      "module": {"over": 0, "semibasis": {0: 1, 1: 1}, "alpha": {"1": [{"coeff": "t", "target": 0}]}},
      "options": {"window": "3..1"}}, "options.window"),
])
def test_malformed_problems(data, witness):
    with pytest.raises(ProblemFileError) as info:
        load_problem(data)
    assert info.value.witness == witness


def test_window_syntax():
    assert parse_window("0..3") == (0, 3)
    assert parse_window([-1, 2]) == (-1, 2)
    assert parse_window(None) is None


def test_ring_overrides():
    assert apply_ring_overrides({}, "Q", 3)["ring"] == {"field": "Q", "precision": 3}
    data = {"ring": {"field": {"Fp": 2}, "precision": 2}}
    assert apply_ring_overrides(data, None, 4)["ring"] == {"field": {"Fp": 2}, "precision": 4}
    assert apply_ring_overrides({"ring": {"Zp": 3, "precision": 2}}, "F5", None)["ring"] == \
        {"field": {"Fp": 5}, "precision": 2}


def test_settings_from_environment(monkeypatch):
    monkeypatch.delenv("DGLIFT_DEFAULT_FIELD", raising=False)
    monkeypatch.setenv("DGLIFT_DEFAULT_PRECISION", "3")
    monkeypatch.setenv("DGLIFT_MAX_STAGES", "many")
    monkeypatch.setenv("DGLIFT_VERBOSE", "yes")
    settings = get_settings()
    assert settings.default_precision == 3
    assert settings.max_stages is None
    assert settings.verbose
    assert apply_ring_overrides({}, None, None)["ring"]["precision"] == 3


def test_field_spec():
    assert field_spec("Q") == {"field": "Q"}
    assert field_spec("f3") == {"field": {"Fp": 3}}
    assert field_spec("Z5") == {"Zp": 5}
    with pytest.raises(ValueError):
        field_spec("R")


def test_report_helpers():
    ring = TruncatedRing.prime_field(2, 2)
    assert format_invariants(ring, [1, 2]) == "R/(t) + R"
    assert format_invariants(ring, []) == "0"
    assert format_invariants(TruncatedRing.p_adic(3, 3), [2]) == "R/(p^2)"
    table = homology_table(ring, {0: [2], 1: [1, 1]})
    assert list(table["free_rank"]) == [1, 0]
    assert list(table["torsion_summands"]) == [0, 2]
    assert to_json({"b": 1, "a": [1]}) == '{\n  "a": [\n    1\n  ],\n  "b": 1\n}'
