import json
import shutil

import pytest

from gklab.cli import run_command
from gklab.zoo import RunConfig, ZooEntry, builtin_zoo_dir, load_zoo, verify_consistency

from _algebras import NONCONFLUENT, POLY1

ZOO = builtin_zoo_dir()


def run(capsys, *argv):
    rc = run_command([str(a) for a in argv])
    out, err = capsys.readouterr()
    return rc, out, err


def test_growth_csv(capsys):
    rc, out, _ = run(capsys, "growth", ZOO / "weyl.alg", "--frame", "1,x,y", "-n", 8, "--format", "csv")
    lines = out.strip().splitlines()
    assert rc == 0
    assert lines[0] == "n,rank" and len(lines) == 10 and lines[-1] == "8,45"


def test_csv_and_json_ranks_agree(capsys):
    _, csv_out, _ = run(capsys, "growth", ZOO / "sl2.alg", "--frame", "1,e,f,h", "-n", 5)
    _, json_out, _ = run(capsys, "growth", ZOO / "sl2.alg", "--frame", "1,e,f,h", "-n", 5, "--format", "json")
    csv_ranks = [int(l.split(",")[1]) for l in csv_out.strip().splitlines()[1:]]
    assert csv_ranks == [v["rank"] for v in json.loads(json_out)["values"]]


def test_calculus_free_algebra(capsys):
    rc, out, _ = run(capsys, "calculus", "(freealg 2)")
    data = json.loads(out)
    assert rc == 0 and data["lo"] == "inf" and data["hi"] == "inf"
    assert data["trace"][0]["cite"]


def test_calculus_normalize(capsys):
    rc, out, _ = run(capsys, "calculus", "(base 3/2 5)", "--normalize")
    assert json.loads(out)["normalized"] == {"lo": "2", "hi": "5", "exact": False}
    rc, _, err = run(capsys, "calculus", "(base 5/4 7/4)", "--normalize")
    assert rc == 1 and "EmptyBound" in err


def test_missing_file(capsys):
    rc, out, err = run(capsys, "growth", "missing.alg", "--frame", "1,x", "-n", 3)
    assert rc == 2 and out == "" and "not found" in err


def test_parse_error_position(tmp_path, capsys):
    bad = tmp_path / "bad.alg"
    bad.write_text("domain: Z\ngenerators: x y\nrule: y x -> x x y\n")
    rc, _, err = run(capsys, "validate-pbw", bad)
    assert rc == 2 and "bad.alg:3:" in err and "OrderingViolation" in err


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "growth", ZOO / "weyl.alg", "-n", 3)[0] == 2
    assert run(capsys, "growth", ZOO / "weyl.alg", "--frame", "x,z", "-n", 3)[0] == 2
    assert run(capsys, "calculus", "(tensor")[0] == 2


def test_budget_exit_code(monkeypatch, capsys):
    monkeypatch.setenv("GKLAB_ROW_CAP", "50")
    rc, _, err = run(capsys, "growth", ZOO / "free2.alg", "--frame", "1,x,y", "-n", 10)
    assert rc == 1 and "BudgetExceeded" in err


def test_require_exact(tmp_path, capsys):
    f = tmp_path / "nc.alg"
    f.write_text(NONCONFLUENT)
    rc, out, err = run(capsys, "growth", f, "--frame", "1,x,y", "-n", 3)
    assert rc == 0 and "upper bound" in err
    rc, _, _ = run(capsys, "growth", f, "--frame", "1,x,y", "-n", 3, "--require-exact")
    assert rc == 1


def test_estimate(capsys):
    rc, out, _ = run(capsys, "estimate", ZOO / "weyl.alg", "--frame", "1,x,y", "-n", 8)
    data = json.loads(out)
    assert rc == 0 and data["estimate"]["class"] == "polynomial" and data["estimate"]["dim"] == "2"


def test_confluence(tmp_path, capsys):
    f = tmp_path / "nc.alg"
    f.write_text(NONCONFLUENT)
    rc, out, _ = run(capsys, "confluence", f)
    data = json.loads(out)
    assert rc == 0 and not data["confluent"]
    assert "x y x" in {a["word"] for a in data["ambiguities"] if not a["resolved"]}


def test_validate_pbw(capsys):
    rc, out, _ = run(capsys, "validate-pbw", ZOO / "qplane.alg")
    data = json.loads(out)
    assert (data["pbw_shape"], data["quasi_commutative"], data["bijective_constants"]) == (True, True, False)
    assert data["constants"] == {"y x": "q"}


def test_module_growth(capsys):
    rc, out, _ = run(capsys, "module-growth", ZOO / "qplane.alg", "--annihilators", "x^2", "--gens", "1",
                     "--frame", "1,x,y", "-n", 3)
    assert rc == 0 and out.strip().splitlines()[1:] == ["0,1", "1,3", "2,5", "3,7"]
    rc, _, err = run(capsys, "module-growth", ZOO / "weyl.alg", "--annihilators", "y", "--frame", "1,x,y", "-n", 3)
    assert rc == 1 and "NotQuasiCommutative" in err


def test_tdeg(capsys):
    rc, out, _ = run(capsys, "tdeg", ZOO / "poly2.alg", "--frames", "1,x,y", "--candidates", "1,x,x+y", "-n", 8)
    data = json.loads(out)
    assert rc == 0 and data["summary_dim"] == "2" and data["label"] == "pool-restricted heuristic"
    rc, _, _ = run(capsys, "tdeg", ZOO / "poly2.alg", "--frames", "1,x,y", "--candidates", "0", "-n", 8)
    assert rc == 2


def test_verify_builtin_zoo(capsys):
    rc, out, _ = run(capsys, "verify")
    lines = out.strip().splitlines()
    assert rc == 0 and len(lines) == len(load_zoo()) and all(l.startswith("PASS") for l in lines)


def test_verify_json(capsys):
    rc, out, _ = run(capsys, "verify", "--format", "json")
    data = json.loads(out)
    assert rc == 0 and all(r["passed"] for r in data)
    assert [r["name"] for r in data] == sorted(r["name"] for r in data)


def test_verify_synthetic_failure(tmp_path, capsys):
    shutil.copy(ZOO / "poly1.alg", tmp_path / "poly1.alg")
    (tmp_path / "bad.json").write_text(json.dumps(
        {"name": "wrong", "presentation": "poly1.alg", "frame": "1,x", "expect": "(freealg 2)"}
    ))
    rc, out, _ = run(capsys, "verify", "--zoo", tmp_path)
    assert rc == 1 and out.startswith("FAIL wrong")


def test_verify_consistency_api():
    entry = ZooEntry("zx-as-free", POLY1, "1,x", "(freealg 2)")
    assert not verify_consistency(entry).passed
    nc = ZooEntry("nc", NONCONFLUENT, "1,x,y", "(freealg 2)")
    rep = verify_consistency(nc)
    assert not rep.passed and "not confluent" in rep.message


def test_run_config_invariant():
    with pytest.raises(ValueError):
        RunConfig(n_max=5)
    assert RunConfig().n_max >= RunConfig().window + RunConfig().max_degree + 1
