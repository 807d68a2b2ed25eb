import json
import subprocess
import sys

import pytest

from fusionsharp import cli

from conftest import group


def run(tmp_path, *args, name="out.json"):
    out = tmp_path / name
    code = cli.run(list(args) + ["--output", str(out)])
    report = json.loads(out.read_text()) if out.exists() else None
    return code, report


def test_group_inspect(tmp_path):
    code, rep = run(tmp_path, "group", "inspect", "--catalog", "sylow_g2", "--p", "5")
    assert code == 0
    assert rep["schema_version"] == cli.SCHEMA_VERSION and rep["tool"] == "fusionsharp"
    r = rep["result"]
    assert r["order"] == 5**6 and r["maximal_class"] and r["maximal_subgroups"] == 6
    assert "output" not in rep["config"] and rep["config"]["profile"] == "desk"


def test_fusion_commands(tmp_path):
    code, rep = run(tmp_path, "fusion", "build", "--catalog", "extraspecial_plus", "--p", "3")
    assert code == 0 and rep["result"]["saturation"]["saturated"]
    code, rep = run(tmp_path, "fusion", "centrics", "--catalog", "extraspecial_plus", "--p", "3",
                    "--mode", "ambient", "--ambient", "sl3_on_points")
    assert code == 0 and len(rep["result"]["centric_classes"]) == 4
    code, rep = run(tmp_path, "fusion", "essentials", "--catalog", "wreath_cp_cp", "--p", "3", "--mode", "ambient")
    assert code == 0 and [e["order"] for e in rep["result"]["essentials"]] == [27]


def test_mackey_verify(tmp_path):
    code, rep = run(tmp_path, "mackey", "verify", "--catalog", "elementary_abelian(2)", "--p", "3",
                    "--mode", "ambient", "--reading", "intersection_in_Q")
    assert code == 0 and rep["result"]["failures"] == 0
    assert rep["config"]["reading"] == "intersection_in_Q"


def test_scan_reports_are_byte_identical_across_workers(tmp_path):
    args = ["sharp", "scan", "--catalog", "wreath_cp_cp", "--p", "3", "--mode", "ambient", "--sample", "0.5",
            "--seed", "2"]
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert cli.run(args + ["--workers", "1", "--output", str(a)]) == 0
    assert cli.run(args + ["--workers", "2", "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_lemmas_and_hlim(tmp_path):
    code, rep = run(tmp_path, "sharp", "lemmas", "--catalog", "extraspecial_plus", "--p", "3", "--mode", "ambient",
                    "--ambient", "holomorph")
    assert code == 0 and rep["result"]["direct"]["ok"]
    code, rep = run(tmp_path, "hlim", "compute", "--catalog", "extraspecial_plus", "--p", "3", "--include-centric")
    assert code == 0
    rows = rep["result"]["functors"]
    assert any(r["Q_centric"] for r in rows) and any(not r["Q_centric"] for r in rows)
    assert all("seconds" not in r for r in rows)


def test_timing_flag(tmp_path):
    code, rep = run(tmp_path, "hlim", "compute", "--catalog", "elementary_abelian(2)", "--p", "3", "--timing")
    assert code == 0 and "seconds" in rep


def test_hlim_budget_is_reported(tmp_path):
    code, rep = run(tmp_path, "hlim", "compute", "--catalog", "extraspecial_plus", "--p", "3", "--include-centric",
                    "--max-entries", "1")
    assert code == 1
    assert any("error" in r for r in rep["result"]["functors"])


def test_fusion_file_generators(tmp_path):
    S = group("elementary_abelian(2)", 3)
    data = {"group": "elementary_abelian(2)", "mode": "generators",
            "generators": [{"subgroup": [[1, 0]], "autos": [[[2, 0]]]}]}
    f = tmp_path / "fusion.json"
    f.write_text(json.dumps(data))
    code, rep = run(tmp_path, "fusion", "build", "--fusion-file", str(f), "--p", "3")
    # inverting one line of C_3 x C_3 alone does not extend to S
    assert code == 1 and rep["result"]["saturation"]["saturated"] is False
    assert S.order == 9


@pytest.mark.parametrize("args,code", [
    (["group", "inspect", "--catalog", "nonsense", "--p", "3"], 3),
    (["group", "inspect", "--catalog", "sylow_g2"], 3),
    (["group", "inspect", "--catalog", "sylow_g2", "--p", "4"], 3),
    (["group", "inspect", "--catalog", "sylow_g2", "--p", "7", "--max-order", "100"], 4),
    (["sharp", "scan", "--catalog", "sylow_g2", "--p", "5", "--sample", "2"], 3),
    (["sharp", "scan", "--catalog", "sylow_g2", "--p", "5", "--workers", "0"], 3),
    (["fusion", "build", "--catalog", "sylow_g2", "--p", "5", "--mode", "ambient"], 3),
])
def test_error_exit_codes(tmp_path, args, code):
    out = tmp_path / "err.json"
    assert cli.run(args + ["--output", str(out)]) == code
    rep = json.loads(out.read_text())
    assert rep["ok"] is False and rep["error"]


def test_malformed_json_file(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{"group": "extraspecial_plus",\n  "mode": }')
    out = tmp_path / "err.json"
    assert cli.run(["fusion", "build", "--fusion-file", str(f), "--p", "3", "--output", str(out)]) == 3
    assert "line 2" in json.loads(out.read_text())["message"]


def test_profile_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.PROFILE_ENV, "ci")
    code, rep = run(tmp_path, "group", "inspect", "--catalog", "extraspecial_plus", "--p", "3")
    assert code == 0 and rep["config"]["profile"] == "ci"
    assert rep["config"]["chain_cap"] == cli.PROFILES["ci"]["chain_cap"]
    monkeypatch.setenv(cli.PROFILE_ENV, "nope")
    assert cli.run(["group", "inspect", "--catalog", "extraspecial_plus", "--p", "3"]) == 3


def test_usage_errors_exit_2():
    proc = subprocess.run([sys.executable, "-m", "fusionsharp", "sharp", "frobnicate"], capture_output=True)
    assert proc.returncode == 2
    proc = subprocess.run([sys.executable, "-m", "fusionsharp", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "fusionsharp" in proc.stdout
