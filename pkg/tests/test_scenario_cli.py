import json
from pathlib import Path

import pytest

from vkdescent.cli import OracleDisagreement, Report, main, run
from vkdescent.finset import CommutingSquare
from vkdescent.graphs import GraphSquare
from vkdescent.oracle import SearchBudget
from vkdescent.scenario import (
    ScenarioError,
    cube_document,
    dump,
    parse_scenario,
    span_document,
    square_document,
)
from vkdescent.vankampen import amalgamate, same_cycle, uniform_span

from .support import example1_bottom, example1_legs, looped_example1

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load(name: str):
    return parse_scenario((FIXTURES / name).read_text())


def cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- parsing -------------------------------------------------------------------


def test_example1_fixture_has_one_span():
    sc = load("example1.json")
    assert len(sc.spans) == 1
    assert isinstance(sc.target_square(), CommutingSquare)
    assert sc.target_span() is not None


@pytest.mark.parametrize("name", ["example1.json", "example2.json", "example3.json", "mono_leg.json", "graph_loops.json"])
def test_every_fixture_parses(name):
    sc = load(name)
    assert sc.target_legs() is not None


def test_graph_fixture_is_a_graph_scenario():
    sc = load("graph_loops.json")
    assert sc.is_graph and isinstance(sc.target_square(), GraphSquare)


def test_unknown_reference_names_the_reference_and_line():
    text = """{
  "sets": {"L": ["x"], "A": ["a"]},
  "maps": {
    "f": {"dom": "L", "cod": "Q", "map": {"x": "a"}}
  }
}"""
    with pytest.raises(ScenarioError) as info:
        parse_scenario(text)
    err = info.value
    assert "Q" in str(err) and err.line == 4


def test_non_commuting_square_reports_a_witness():
    text = json.dumps({
        "sets": {"L": ["x"], "A": ["a1", "a2"]},
        "maps": {
            "f": {"dom": "L", "cod": "A", "map": {"x": "a1"}},
            "g": {"dom": "L", "cod": "A", "map": {"x": "a2"}},
            "idL": {"dom": "L", "cod": "L", "map": {"x": "x"}},
            "idA": {"dom": "A", "cod": "A", "map": {"a1": "a1", "a2": "a2"}},
        },
        "squares": {"bad": {"left": "idL", "top": "f", "right": "idA", "bottom": "g"}},
    }, indent=1)
    with pytest.raises(ScenarioError) as info:
        parse_scenario(text)
    assert info.value.name == "bad" and "'x'" in str(info.value)


def test_duplicate_names_are_rejected():
    text = '{"sets": {"L": ["x"], "L": ["y"]}}'
    with pytest.raises(ScenarioError) as info:
        parse_scenario(text)
    assert info.value.name == "L"


def test_malformed_json_reports_its_line():
    with pytest.raises(ScenarioError) as info:
        parse_scenario('{\n  "sets": {,}\n}')
    assert info.value.line == 2


def test_cube_round_trip():
    a, r = example1_legs()
    cube = amalgamate(uniform_span(a, r), example1_bottom())
    sc = parse_scenario(dump(cube_document(cube)))
    assert list(sc.cubes.values()) == [cube]


def test_span_and_square_round_trip():
    a, r = example1_legs()
    span, bottom = uniform_span(a, r), example1_bottom()
    sc = parse_scenario(dump(span_document(span, bottom)))
    assert sc.target_span() == span and sc.target_square() == bottom
    assert parse_scenario(dump(square_document(bottom))).target_square() == bottom


def test_graph_square_round_trip():
    from vkdescent.graphs import graph_pushout_square

    sq = graph_pushout_square(*looped_example1())
    assert parse_scenario(dump(square_document(sq))).target_square() == sq


# -- commands through run ------------------------------------------------------


def test_check_vk_report_on_example1():
    rep = run("check-vk", load("example1.json"))
    assert isinstance(rep, Report) and rep.exit_code == 1
    assert same_cycle(rep.data["cycles"]["elements"], ["x", "z", "w", "y"])


def test_check_vk_with_oracle_agrees():
    rep = run("check-vk", load("example3.json"), SearchBudget(), oracle=True)
    assert rep.verdict and rep.data["oracle"] is True


def test_check_reachable_reports_cycle_transport():
    rep = run("check-reachable", load("example1.json"), oracle=True)
    assert not rep.verdict
    assert any("transport" in line for line in rep.details)


def test_counterexample_on_graph_fixture():
    rep = run("counterexample", load("graph_loops.json"))
    assert rep.verdict
    assert list(rep.data["twisted"]) == ["vertices"]
    assert parse_scenario(dump(rep.data["span"])).target_span() is not None


def test_oracle_disagreement_is_an_error(monkeypatch):
    import vkdescent.cli as cli_mod

    monkeypatch.setattr(cli_mod, "brute_van_kampen_counterexample", lambda sq, budget: None)
    with pytest.raises(OracleDisagreement):
        run("check-vk", load("example1.json"), oracle=True)


def test_unknown_command_is_rejected():
    with pytest.raises(ValueError):
        run("frobnicate", load("example1.json"))


# -- the entry point -----------------------------------------------------------


def test_check_vk_exit_code_and_cycle(capsys):
    code, out, _ = cli(capsys, "check-vk", "--scenario", str(FIXTURES / "example1.json"))
    assert code == 1
    assert "Van Kampen: no" in out and "domain cycle (w, y, x, z)" in out


def test_amalgamate_example2(capsys):
    code, out, _ = cli(capsys, "amalgamate", "--scenario", str(FIXTURES / "example2.json"))
    assert code == 0
    assert "|K| = 2" in out and "sigma" in out


def test_cycles_on_a_mono_leg(capsys):
    code, out, _ = cli(capsys, "cycles", "--scenario", str(FIXTURES / "mono_leg.json"))
    assert code == 0 and "separated kernels" in out


def test_json_format(capsys):
    code, out, _ = cli(capsys, "check-vk", "--scenario", str(FIXTURES / "example3.json"), "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] is True and doc["exit_code"] == 0


def test_dot_format(capsys):
    code, out, _ = cli(capsys, "amalgamate", "--scenario", str(FIXTURES / "example2.json"), "--format", "dot")
    assert code == 0 and out.startswith("digraph cube {")
    assert "style=dashed" in out
    code, out, _ = cli(capsys, "check-vk", "--scenario", str(FIXTURES / "example1.json"), "--format", "dot")
    assert out.startswith("graph incidence {") and "color=red" in out


def test_graph_dot_has_both_components(capsys):
    _, out, _ = cli(capsys, "check-vk", "--scenario", str(FIXTURES / "graph_loops.json"), "--format", "dot")
    assert "cluster_vertices" in out and "cluster_edges" in out


def test_missing_file_exits_2(capsys, tmp_path):
    code, _, err = cli(capsys, "check-vk", "--scenario", str(tmp_path / "nope.json"))
    assert code == 2 and err.startswith("error:")


def test_bad_scenario_as_json_error(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"sets": {"L": ["x", "x"]}}')
    code, out, _ = cli(capsys, "check-vk", "--scenario", str(bad), "--format", "json")
    doc = json.loads(out)
    assert code == 2 and doc["exit_code"] == 2 and "error" in doc


def test_target_without_square_is_an_error(capsys, tmp_path):
    f = tmp_path / "empty.json"
    f.write_text('{"sets": {"L": ["x"]}}')
    code, _, err = cli(capsys, "check-vk", "--scenario", str(f))
    assert code == 2 and "target" in err


def test_stdin_scenario(capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO((FIXTURES / "mono_leg.json").read_text()))
    code, out, _ = cli(capsys, "check-vk", "--scenario", "-")
    assert code == 0 and "Van Kampen: yes" in out
