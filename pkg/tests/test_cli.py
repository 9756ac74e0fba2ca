import json
import subprocess
import sys

import pytest

from qkdv.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("QKDV_CACHE", str(tmp_path))
    return tmp_path


def test_genus_rhs(capsys):
    code, out = run(capsys, "genus-rhs", "--kmax", "10")
    assert code == 0
    assert out == "0 0 0 1 4 9 21 37 69 113 187\n"


def test_deform_weight2(capsys, cache_dir):
    code, out = run(capsys, "deform", "--weight", "2", "--order", "8")
    assert code == 0
    first = out.splitlines()[0]
    assert first.startswith("r(2) = s(2) + s(1,1)*((-1/8)*sigma^1 + (1/512)*sigma^3")
    assert "(5/2097152)*sigma^7 + O(sigma^8)" in first


def test_deform_latex(capsys, cache_dir):
    code, out = run(capsys, "deform", "--weight", "2", "--order", "4", "--format", "latex")
    assert code == 0
    assert "r_{(2)} &= s_{(2)}+s_{(1,1)}\\left(-\\frac{\\sigma}{8}+\\frac{\\sigma^{3}}{512}+\\mathcal{O}(\\sigma^{4})\\right)" in out


def test_deterministic_and_cache_transparent(capsys, cache_dir):
    outs = []
    for extra in ([], [], ["--no-cache"]):
        code, out = run(capsys, "deform", "--weight", "3", "--order", "5", "--format", "json", *extra)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1] == outs[2]
    assert any(cache_dir.iterdir())
    data = json.loads(outs[0])
    assert data["basis"] == ["(3)", "(2,1)", "(1,1,1)"]


def test_no_cache_writes_nothing(capsys, tmp_path):
    code, _ = run(capsys, "curve", "--weight", "1", "--m", "2", "--cache-dir", str(tmp_path), "--no-cache")
    assert code == 0
    assert not any(tmp_path.iterdir())


def test_curve_outputs(capsys, cache_dir):
    code, out = run(capsys, "curve", "--weight", "1", "--m", "1", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["sigma_power,rho_power,coefficient", "0,1,1", "1,0,-241/2880"]
    code, out = run(capsys, "curve", "--weight", "1", "--m", "1", "--format", "json")
    assert json.loads(out)["table"] == [[0, 1, "1"], [1, 0, "-241/2880"]]


def test_identities_csv(capsys, cache_dir):
    code, out = run(capsys, "identities", "--kmax", "8", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "k,lambda,mu,shared_P2,corollary,lemma_m1"
    assert lines[1] == '6,"(4,1,1)","(3,3)",6,0,0'
    assert len(lines) == 6


def test_eigen_and_ham(capsys, cache_dir):
    code, out = run(capsys, "eigen", "--weight", "2", "--mmax", "1")
    assert code == 0 and "MISMATCH" not in out
    code, out = run(capsys, "ham", "--m", "0", "--weight", "1")
    assert code == 0
    assert "[23/24*h^2 + 1/2*U0^2]" in out
    code, out = run(capsys, "ham", "--m", "6", "--weight", "2", "--dispersionless", "--format", "json")
    assert code == 0 and json.loads(out)["provenance"]


def test_commute(capsys, cache_dir):
    code, out = run(capsys, "commute", "--mmax", "2", "--weight", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "kind,m,n,weight,commutes"
    assert all(line.endswith(",1") for line in out.splitlines()[1:])


def test_commute_threads_identical(capsys, cache_dir):
    _, single = run(capsys, "commute", "--mmax", "4", "--weight", "3", "--format", "json")
    _, multi = run(capsys, "commute", "--mmax", "4", "--weight", "3", "--format", "json", "--threads", "2")
    assert single == multi


def test_yjm(capsys):
    code, out = run(capsys, "yjm", "--weight", "3", "--zorder", "6")
    assert code == 0
    assert "zero defect" in out and "col-row" in out


def test_characters(capsys):
    code, out = run(capsys, "characters", "--weight", "2", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ['lambda,(2),"(1,1)"', "(2),1,1", '"(1,1)",-1,1']


@pytest.mark.parametrize(
    "argv",
    [
        ["deform", "--weight", "11"],
        ["deform", "--order", "13"],
        ["ham", "--m", "4"],
        ["ham", "--m", "9", "--dispersionless"],
        ["curve", "--m", "4"],
        ["genus-rhs", "--kmax", "x"],
        ["nonsense"],
    ],
)
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_module_entry_point_and_selftest(tmp_path):
    env = {"QKDV_CACHE": str(tmp_path), "PATH": "/usr/bin:/bin"}
    first = subprocess.run([sys.executable, "-m", "qkdv", "selftest"], capture_output=True, text=True, env=env)
    assert first.returncode == 0, first.stdout + first.stderr
    assert "10/10 criteria passed" in first.stdout
    # second run finds the cache files and compares them byte for byte
    second = subprocess.run([sys.executable, "-m", "qkdv", "selftest"], capture_output=True, text=True, env=env)
    assert second.returncode == 0
    assert "matches recomputation" in second.stdout
