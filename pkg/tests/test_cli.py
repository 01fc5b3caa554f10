import json

import pytest

from covbounds.cli import main
from covbounds.oracle import builtin_design, save_pointset


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_lower_json(capsys):
    code, out = run(capsys, "lower", "--n", "3", "--tau", "4", "--m", "10", "--format", "json")
    assert code == 0
    d = json.loads(out.out)
    assert d["summary"]["mC"] == 3
    assert d["report"]["branches"][0]["trace"]


def test_lower_boundary_ell(capsys):
    code, out = run(capsys, "lower", "--n", "3", "--tau", "4", "--m", "10", "--ell", "-1",
                    "--format", "csv")
    assert code == 0
    assert "0.689897,0.689897" in out.out


def test_lower_assume(capsys):
    code, out = run(capsys, "lower", "--n", "4", "--tau", "6", "--m", "31", "--ell", "-0.9",
                    "--assume-ell-le-t1", "--format", "csv")
    assert code == 0 and out.out.strip().endswith("0.771819")


def test_lower_invalid(capsys):
    code, out = run(capsys, "lower", "--n", "3", "--tau", "4", "--m", "8")
    assert code == 2 and "DGS" in out.err
    code, _ = run(capsys, "lower", "--n", "3", "--tau", "4", "--m", "10", "--ell", "0.5")
    assert code == 2


@pytest.mark.parametrize("argv,expected", [
    (["--n", "3", "--tau", "4", "--m", "10"], "0.7545"),
    (["--n", "3", "--tau", "3", "--m", "8", "--antipodal"], "0.6667"),
    (["--n", "3", "--tau", "5", "--m", "12", "--antipodal"], "0.7947"),
])
def test_upper(capsys, argv, expected):
    code, out = run(capsys, "upper", *argv, "--format", "json")
    assert code == 0
    assert json.loads(out.out)["upper_bound"] == expected


def test_table1_csv(capsys):
    code, out = run(capsys, "table", "1", "--format", "csv")
    lines = out.out.strip().splitlines()
    assert code == 0
    assert lines[0] == "n,cardinality,strength,ell,fl_bound,new_bound"
    assert len(lines) == 19


def test_table1_diff(capsys):
    code, out = run(capsys, "table", "1", "--diff")
    assert code == 0 and out.out.strip().endswith("18 rows, 0 failures")


def test_quadrature(capsys):
    code, out = run(capsys, "quadrature", "--n", "3", "--k", "2", "--ell", "-0.9")
    d = json.loads(out.out)
    assert code == 0
    assert set(d) == {"n", "k", "ell", "nodes", "weights", "valid_strict"}
    assert all(w > 0 for w in d["weights"])


def test_verify_file(capsys, tmp_path):
    path = tmp_path / "cross4.txt"
    save_pointset(builtin_design("cross-polytope(4)"), path)
    code, out = run(capsys, "verify", "--file", str(path), "--tau", "3", "--format", "json")
    assert code == 0 and json.loads(out.out)["verdict"] == "pass"
    code, out = run(capsys, "verify", "--file", str(path), "--tau", "4", "--format", "json")
    d = json.loads(out.out)
    assert d["verdict"] == "fail" and d["worst_residual"] > 0


def test_bad_arguments(capsys):
    assert main(["lower", "--n", "3"]) == 2
    assert main(["verify", "--tau", "3"]) == 2
    capsys.readouterr()


def test_verify_builtin_measure(capsys):
    code, out = run(capsys, "verify", "--builtin", "icosahedron", "--tau", "5", "--measure",
                    "--format", "json")
    d = json.loads(out.out)
    assert code == 0 and d["verdict"] == "pass"
    assert d["rho"] == pytest.approx(0.7946544722917661, abs=1e-12)
    assert d["attaining"] >= 3
