import io
import json
import subprocess
import sys

import pytest

from uvbkit.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_reduce():
    code, out, _ = call("reduce", "--n", "3", "s1 r1")
    assert code == 0 and out == "l1,2^-1 [1,2,3]\n"
    code, out, _ = call("reduce", "--n", "3", "--format", "json", "s1 r1")
    assert json.loads(out) == {"lambda": "l1,2^-1", "perm": "[1,2,3]"}


def test_eq():
    assert call("eq", "--n", "4", "r1 s1^-1", "l1,2")[1] == "EQUAL\n"
    assert call("eq", "--n", "4", "s1", "r1")[1] == "NOT_EQUAL\n"


def test_act_expand_abelianize():
    assert call("act", "--n", "3", "--perm", "(2 3)", "l1,2")[1] == "l1,3\n"
    assert call("act", "--n", "3", "--perm", "[2,1,3]", "l1,2^-1 l2,1")[1] == "l2,1^-1 l1,2\n"
    assert call("expand", "--n", "3", "l1,3")[1] == "r2 r1 s1^-1 r2\n"
    assert call("abelianize", "--n", "3", "l1,2")[1] == "-1 1\n"
    assert call("abelianize", "--n", "3", "--group", "uvp", "l1,3^2 l3,1^-1")[1] == "0 2 0 0 -1 0\n"


def test_verify_relations():
    code, out, _ = call("verify", "relations", "--n", "5", "--presentation", "uvb")
    assert code == 0
    assert out.splitlines()[-1] == "summary OK=31 FAIL=0 UNKNOWN=0"
    code, out, _ = call("verify", "relations", "--n", "3", "--presentation", "wb", "--format", "json")
    assert json.loads(out)["engine"] == "syntactic"


def test_verify_small_suites():
    code, out, _ = call("verify", "gamma-outer", "--n", "4")
    assert code == 0 and out.startswith("ProvenNotInner(PAIR_SWAP)")
    code, out, _ = call("verify", "hbar", "--n", "3")
    assert code == 0 and out.startswith("hbar n=3 injective=true surjective=false")
    code, out, _ = call("verify", "autos", "--n", "3")
    assert code == 0 and "beta_gamma_commute true" in out


def test_verify_tss_flags_and_exits_2():
    code, out, _ = call("verify", "tss", "--n", "3")
    assert code == 2
    first = out.splitlines()[0]
    assert "commuting=true" in first and "full_symmetry=false" in first and first.endswith("flagged")
    code, out, _ = call("tss", "--n", "3", "--i", "1", "--format", "json")
    d = json.loads(out)
    assert code == 2 and d["stabilizer"] == ["[1,2,3]"] and d["flagged"] is True


def test_census_schema(tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = call("census", "--presentation", "uvb", "--n", "3", "--target", "s3",
                        "--dedup", "--classify", "theorem-a", "--out", str(path))
    assert out == ""
    data = json.loads(path.read_text())
    assert set(data["meta"]) >= {"n", "target", "node_count", "wall_time"}
    assert data["meta"]["wall_time"] is None
    row = data["classes"][0]
    assert set(row) == {"representative", "size", "bucket"}
    assert list(row["representative"]) == ["r1", "r2", "s1", "s2"]
    assert sum(data["summary"].values()) == len(data["classes"])
    # n = 3 lies outside the classified range and carries extra classes
    assert code == 2 and data["flags"] == ["THEOREM_DEVIATION"]


def test_census_n2_is_clean():
    code, out, _ = call("census", "--n", "2", "--target", "s2", "--dedup", "--format", "json")
    assert code == 0 and json.loads(out)["meta"]["homs"] == 4


def test_timing_is_opt_in():
    _, out, _ = call("census", "--n", "2", "--target", "z2", "--format", "json", "--timing")
    assert isinstance(json.loads(out)["meta"]["wall_time"], float)


@pytest.mark.parametrize("argv,code_name", [
    (["reduce", "--n", "3", "s4"], "IndexOutOfRange"),
    (["reduce", "--n", "3", "l1,1"], "EqualIndices"),
    (["reduce", "--n", "3", "--bogus", "s1"], "Usage"),
    (["frobnicate"], "Usage"),
    (["census", "--n", "3", "--target", "s3", "--budget", "10"], "BudgetExceeded"),
    (["census", "--n", "3", "--target", "q7"], "CensusError"),
    (["verify", "theorem-a", "--n", "4"], "Usage"),
    (["reduce", "--n", "1", "s1"], "Usage"),
    (["census", "--n", "3", "--target", "s3", "--workers", "0"], "Usage"),
])
def test_errors_are_single_line(argv, code_name):
    code, out, err = call(*argv)
    assert code == 1 and out == ""
    assert err.startswith(f"error[{code_name}]: ") and err.count("\n") == 1


def test_env_budget(monkeypatch):
    monkeypatch.setenv("UVBKIT_BUDGET", "5")
    code, _, err = call("census", "--n", "3", "--target", "s3")
    assert code == 1 and err.startswith("error[BudgetExceeded]")


def test_aut_apply_and_check(tmp_path):
    spec = tmp_path / "beta.json"
    spec.write_text(json.dumps({"target": "UVB", "n": 3, "images": {"s1": "s1^-1", "s2": "s2^-1"}}))
    assert call("aut", "apply", "--spec", str(spec), "--elem", "l1,2") == (0, "l2,1^-1 [1,2,3]\n", "")
    assert call("aut", "check", "--spec", str(spec))[1] == "UVB_3 OK\n"
    wb = tmp_path / "alpha.json"
    wb.write_text(json.dumps({"target": "WB", "n": 3, "images": {"s1": "r1 s1^-1 r1", "s2": "r2 s2^-1 r2"}}))
    assert call("aut", "check", "--spec", str(wb))[1] == "WB_3 OK\n"
    assert call("aut", "apply", "--spec", str(wb), "--elem", "s1 s2")[1] == "r1 s1^-1 r1 r2 s2^-1 r2\n"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"target": "UVB", "n": 3, "images": {"s1": "s1^2"}}))
    assert call("aut", "check", "--spec", str(bad))[0] == 2
    assert call("aut", "apply", "--spec", str(bad), "--elem", "s1")[0] == 1
    assert call("aut", "apply", "--spec", str(tmp_path / "missing.json"), "--elem", "s1")[0] == 1


def test_s6_outer():
    code, out, _ = call("s6-outer")
    assert code == 0 and "generates_S6 true" in out and out.startswith("s1 -> [2,1,4,3,6,5]")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "uvbkit", "eq", "--n", "3", "s1 r1", "l1,2^-1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "EQUAL\n"
