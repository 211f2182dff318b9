import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from opcal import base_cat as bc
from opcal.cli import ParseError, UsageError, ValidationError, main, parse_text, run_command

from conftest import stirling2

DEMOS = Path(__file__).resolve().parents[1] / "demos" / "workspaces"

MINIMAL = {
    "base": "finset",
    "colors": ["a"],
    "families": {"M01": {"a": ["0", "1"]}},
    "operads": {"Com": {"builder": "commutative", "arity_bound": 3}},
}


def workspace(**extra):
    return parse_text(json.dumps({**MINIMAL, **extra}))


def write(tmp_path, data):
    p = tmp_path / "ws.json"
    p.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return str(p)


def test_minimal_workspace():
    ws = workspace()
    assert list(ws.operads) == ["Com"]


def test_undefined_operad_is_a_validation_error():
    with pytest.raises(ValidationError):
        workspace(algebras={"T": {"operad": "Nope", "builder": "terminal"}})


def test_bad_json_reports_position():
    with pytest.raises(ParseError, match=r":2:"):
        parse_text('{"base": "finset",\n "colors": [a]}')


def test_unknown_base_rejected():
    with pytest.raises(ValidationError):
        parse_text(json.dumps({"base": "groups"}))


def test_non_equivariant_gamma_fails_at_load():
    data = json.loads((DEMOS / "explicit.json").read_text())
    # the entry for f = [1, 0] must swap m and n; make it the identity
    data["operads"]["Bin"]["gamma"][3]["table"] = {"e,e|m": "m", "e,e|n": "n"}
    with pytest.raises(bc.DescentError):
        parse_text(json.dumps(data))


def test_compose_matches_stirling_sums():
    ws = workspace()
    ok, rep = run_command(ws, "compose Com Com --m-bound 4")
    assert ok
    for n in range(4):
        grades = next(v["grades"] for k, v in rep["sizes"].items() if k.count("a") == n + 1)
        # grade m: partitions of n inputs into at most m blocks; m <= arity bound
        assert grades == [sum(stirling2(n, k) for k in range(m + 1)) for m in range(4)]


def test_universal_property_command():
    ok, rep = run_command(workspace(), "universal-property Com M01 --bound 3")
    assert ok
    assert rep == {"operad_maps": 4, "algebras": 4, "bijective": True}


def test_missing_bound_is_a_usage_error():
    with pytest.raises(UsageError):
        run_command(workspace(), "maps Com Com")
    with pytest.raises(UsageError):
        run_command(workspace(), "frobnicate Com")


def test_exit_code_zero_on_pass(tmp_path, capsys):
    path = write(tmp_path, {**MINIMAL, "operads": {
        "Assoc": {"builder": "associative", "arity_bound": 4}}})
    assert main([path, "check", "operad", "Assoc", "--bound", "4"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["reports"][0]["status"] == "pass"


def test_exit_code_one_on_failed_check(tmp_path, capsys):
    data = {**MINIMAL, "operads": {"Com": {"builder": "commutative", "arity_bound": 2}},
            "algebras": {"Bad": {"operad": "Com", "family": "M01", "action": [
                {"corolla": {"inputs": [], "output": "a"}, "table": {"|•": "0"}},
                {"corolla": {"inputs": ["a"], "output": "a"},
                 "table": {"0|•": "1", "1|•": "0"}},
                {"corolla": {"inputs": ["a", "a"], "output": "a"},
                 "table": {"0,0|•": "0", "0,1|•": "0", "1,0|•": "0", "1,1|•": "0"}}]}}}
    path = write(tmp_path, data)
    assert main([path, "check", "algebra", "Bad", "--bound", "2"]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["reports"][0]["result"]["first_violation"]["law"] == "unit"


def test_exit_code_two_on_usage_error(tmp_path, capsys):
    path = write(tmp_path, MINIMAL)
    assert main([path, "maps", "Com"]) == 2
    assert main([str(tmp_path / "missing.json"), "maps", "Com", "Com", "--bound", "2"]) == 2
    assert main([write(tmp_path, "{oops"), "maps", "Com", "Com", "--bound", "2"]) == 2
    capsys.readouterr()


def test_explicit_operad_demo_runs(capsys):
    assert main([str(DEMOS / "explicit.json")]) == 0
    out = json.loads(capsys.readouterr().out)
    up = out["reports"][1]["result"]
    # Bin is the free operad on one binary operation with a free swap, so
    # algebra structures on {0,1} are all binary tables
    assert up == {"operad_maps": 16, "algebras": 16, "bijective": True}


def test_change_colors_commands(tmp_path, capsys):
    data = {**MINIMAL,
            "colors": ["a", "b"],
            "families": {},
            "operads": {"Com": {"builder": "commutative", "colors": ["c"], "arity_bound": 2}},
            "color_maps": {"fold": {"source": ["a", "b"], "target": ["c"],
                                    "map": {"a": "c", "b": "c"}}}}
    path = write(tmp_path, data)
    assert main([path, "change-colors", "fold", "Com", "--bound", "2"]) == 0
    rep = json.loads(capsys.readouterr().out)["reports"][0]["result"]
    assert set(rep["sizes"].values()) == {1}
    # the fold map is the standard witness that f* is only lax monoidal
    assert main([path, "change-colors", "fold", "Com", "Com", "--bound", "1",
                 "--m-bound", "2"]) == 1
    capsys.readouterr()


def test_vectq_workspace_with_rational_action(tmp_path, capsys):
    # the swap acts by the involution [[1/2, 3/2], [1/2, -1/2]]
    data = {"base": "vectq", "colors": ["a"],
            "collections": {"V": {"arity_bound": 2, "entries": [
                {"inputs": ["a"], "output": "a", "value": ["e"]},
                {"inputs": ["a", "a"], "output": "a", "value": ["u", "v"]}],
                "actions": [{"inputs": ["a", "a"], "output": "a", "transposition": 0,
                             "table": {"u": {"u": "1/2", "v": "1/2"},
                                       "v": {"u": "3/2", "v": "-1/2"}}}]}},
            "commands": ["compose V V --arity 2"]}
    path = write(tmp_path, data)
    assert main([path]) == 0
    rep = json.loads(capsys.readouterr().out)["reports"][0]["result"]
    assert rep["sizes"]["(a,a;a)"]["grades"] == [0, 2, 2]


def test_non_involutive_swap_rejected():
    data = {"base": "vectq", "colors": ["a"],
            "collections": {"V": {"arity_bound": 2, "entries": [
                {"inputs": ["a", "a"], "output": "a", "value": ["u", "v"]}],
                "actions": [{"inputs": ["a", "a"], "output": "a", "transposition": 0,
                             "table": {"u": {"u": "1/2", "v": "3/4"},
                                       "v": {"u": "3/2", "v": "-1/2"}}}]}}}
    with pytest.raises(ValidationError):
        parse_text(json.dumps(data))


def test_table_goes_to_stderr(tmp_path, capsys):
    path = write(tmp_path, MINIMAL)
    assert main(["--table", path, "maps", "Com", "Com", "--bound", "2"]) == 0
    captured = capsys.readouterr()
    assert "PASS" in captured.err and "count: 1" in captured.err
    assert json.loads(captured.out)["reports"][0]["result"] == {"count": 1}


def test_reports_are_deterministic_across_threads(tmp_path):
    data = {**MINIMAL, "commands": ["compose Com Com --m-bound 3", "maps Com Com --bound 2",
                                    "universal-property Com M01 --bound 2",
                                    "check operad Com --bound 3"]}
    path = write(tmp_path, data)
    outs = set()
    for threads in ("1", "4", "4"):
        env = {**os.environ, "OPCAL_THREADS": threads}
        proc = subprocess.run([sys.executable, "-m", "opcal", path], capture_output=True,
                              env=env, check=True)
        outs.add(proc.stdout)
    assert len(outs) == 1


def test_bad_thread_count(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("OPCAL_THREADS", "0")
    path = write(tmp_path, MINIMAL)
    assert main([path, "maps", "Com", "Com", "--bound", "2"]) == 2
    capsys.readouterr()
