import json

import numpy as np
import pytest

from moritalab.cli import (builtin_names, build_inclusion, load_scenario, main, parse_scenario,
                           report_json, run_scenario)
from moritalab.config import RunConfig
from moritalab.errors import ParseError

S2_TEXT = """name: s2_copy
ambient_dim: 2
generators_A:
  - [[1, 0], [0, 0]]
generators_C: full
expectation: trace
expected_index: 2
morita:
  n: 1
  p: [[1, 0], [0, 1]]
depth: 1
"""


def write(tmp_path, text, name="sc.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_builtins_listed_and_loadable(capsys):
    names = builtin_names()
    assert names == ["s1_trace_m2", "s2_pinching_d2", "s3_corner_of_s1", "s4_tower_bimodule"]
    assert main(["list-builtins"]) == 0
    out = capsys.readouterr().out
    assert all(n in out for n in names)
    sc = load_scenario("s3_corner_of_s1")
    assert sc.morita[0] == 2 and sc.expectation.shape == (4, 4)


def test_complex_entries_and_expectation_matrix():
    text = S2_TEXT.replace("[[1, 0], [0, 0]]", "[[[1, 0], 0], [0, [0, 0]]]")
    sc = parse_scenario(text)
    assert sc.generators_A[0].dtype == complex and sc.generators_A[0][0, 0] == 1
    E = build_inclusion(sc, 1e-9)
    assert E.target.dim == 2


@pytest.mark.parametrize("text,line,col,msg", [
    ("name: x\nambient_dim: 2\ngenerators_A: scalars\ngenerators_C: full\nexpectation: trace\nbogus: 1\n",
     6, 1, "unknown key"),
    ("name: x\nambient_dim: 2\ngenerators_A:\n  - [[1, 0], [0]]\ngenerators_C: full\nexpectation: trace\n",
     4, 5, "different lengths"),
    ("name: x\nambient_dim: two\ngenerators_A: scalars\ngenerators_C: full\nexpectation: trace\n",
     2, 14, "expected a number"),
    ("name: x\nambient_dim: 2\ngenerators_A: scalars\ngenerators_C: full\nexpectation: [[1, 2]\n",
     6, 1, "malformed"),
    ("name: x\nambient_dim: 2\ngenerators_A: scalars\ngenerators_C: full\n", 1, 1, "missing required key"),
    ("name: x\nambient_dim: 2\ngenerators_A: scalars\ngenerators_C: full\nexpectation: trace\n"
     "morita:\n  n: 1\n  p: [[1, 0], [0, 1], [0, 0]]\n", 8, 6, "expected a 2x2 matrix"),
])
def test_parse_errors_carry_position(text, line, col, msg):
    with pytest.raises(ParseError) as ei:
        parse_scenario(text)
    assert ei.value.line == line and ei.value.column == col
    assert msg in str(ei.value)


def test_exit_codes(tmp_path, capsys):
    assert main(["verify", write(tmp_path, S2_TEXT)]) == 0
    assert main(["verify", write(tmp_path, "name: x\nambient_dim: [\n", "bad.yaml")]) == 2
    assert main(["verify", str(tmp_path / "missing.yaml")]) == 2
    assert main(["verify"]) == 2
    assert main(["verify", write(tmp_path, S2_TEXT.replace("expected_index: 2", "expected_index: 3"),
                                 "wrong.yaml")]) == 1
    err = capsys.readouterr().err
    assert "input error" in err


def test_non_projection_becomes_failed_check(tmp_path):
    text = S2_TEXT.replace("p: [[1, 0], [0, 1]]", "p: [[1, 1], [0, 0]]")
    res = run_scenario(parse_scenario(text), RunConfig(depth=1))
    err = res.report["pair.error"]
    assert not err.passed and "NotProjectionError" in err.detail
    assert res.report["build.quasi_basis_left"].passed
    assert "skipped" in res.report["transport.error"].detail
    assert main(["verify", write(tmp_path, text)]) == 1


def test_bad_downward_projection_becomes_failed_check():
    text = S2_TEXT + "downward:\n  p: [[1, 0], [0, 0]]\n  q: [[1, 0], [0, 0]]\n"
    res = run_scenario(parse_scenario(text), RunConfig(depth=1, filter="updown"))
    assert "BadProjectionError" in res.report["updown.error"].detail


def test_depth_over_cap_keeps_partial_results(tmp_path):
    res = run_scenario(parse_scenario(S2_TEXT), RunConfig(depth=4, filter="paragroup"))
    assert "SizeCapError" in res.report["paragroup.error"].detail
    res = run_scenario(parse_scenario(S2_TEXT), RunConfig(depth=4, filter="build"))
    assert res.passed
    dot = tmp_path / "empty.dot"
    assert main(["verify", write(tmp_path, S2_TEXT), "--depth", "4", "--filter", "paragroup",
                 "--dot", str(dot)]) == 1
    assert dot.read_text() == 'digraph "s2_copy" {\n}\n'


def test_filter_selects_checks(tmp_path):
    res = run_scenario(parse_scenario(S2_TEXT), RunConfig(depth=1, filter="exchange.index_exchange"))
    assert list(res.report.checks) == ["exchange.index_exchange"]
    res = run_scenario(parse_scenario(S2_TEXT), RunConfig(depth=1, filter="linking.*quasi_basis*"))
    assert res.report.checks and all(k.startswith("linking.") for k in res.report.checks)


def test_report_and_dot_files(tmp_path):
    rep, dot = tmp_path / "r.json", tmp_path / "g.dot"
    assert main(["verify", "s1_trace_m2", "--depth", "1", "--filter", "paragroup",
                 "--report", str(rep), "--dot", str(dot)]) == 0
    doc = json.loads(rep.read_text())
    assert doc["passed"] and doc["paragroup"]["left"]["rc_dims"] == [4, 16]
    assert 'L0_0 -> L1_0 [label="2"];' in dot.read_text()


def test_compare_command(tmp_path, capsys):
    dot, rep = tmp_path / "c.dot", tmp_path / "c.json"
    assert main(["compare", "s1_trace_m2", "s3_corner_of_s1", "--depth", "1", "--dot", str(dot),
                 "--report", str(rep)]) == 0
    text = dot.read_text()
    assert text.startswith("// s1_trace_m2 vs s3_corner_of_s1: isomorphic")
    assert text.count("digraph") == 2
    assert json.loads(rep.read_text())["equal"] is True
    assert main(["compare", "s1_trace_m2", "s2_pinching_d2", "--depth", "1"]) == 1
    assert "different (level 0" in capsys.readouterr().out


def test_report_json_is_sorted_and_untimed():
    res = run_scenario(parse_scenario(S2_TEXT), RunConfig(depth=1, filter="build"))
    doc = json.loads(report_json(res))
    names = [c["name"] for c in doc["checks"]]
    assert names == sorted(names)
    assert "timings" not in report_json(res) and "elapsed" not in report_json(res)
    assert np.isclose(float(doc["checks"][0]["violation"]), res.report[names[0]].violation, rtol=1e-3)
