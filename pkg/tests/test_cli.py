import json

import pytest

from cells.algebra_io import load_algebra
from main import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_build_to_file(capsys, tmp_path):
    path = tmp_path / "end3.json"
    code, out, _ = run(capsys, "build", "end-chain:3", "-o", str(path))
    assert code == 0
    assert "ai-semiring with 10 elements" in out
    assert load_algebra(str(path)).size == 10


def test_build_machine_format(capsys):
    code, out, _ = run(capsys, "--format", "machine", "build", "brandt")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "inverse"
    assert len(doc["elements"]) == 6


def test_check_identity(capsys):
    code, out, _ = run(capsys, "check-identity", "a21", "x + x*x = x*x")
    assert code == 0
    assert "Satisfied (6 assignments)" in out

    code, out, _ = run(capsys, "ci", "a21", "x + x*x = x")
    assert code == 1
    assert "Counterexample: x ↦ a; lhs = 0, rhs = a" in out


def test_check_identity_machine_format(capsys):
    code, out, _ = run(capsys, "check-identity", "end0-chain:3", "x + x*x = x*x", "--format", "machine")
    assert code == 1
    doc = json.loads(out)
    assert doc["holds"] is False
    assert doc["assignment"] == {"x": "(0,0,1)"}


def test_check_identity_errors(capsys):
    code, _, err = run(capsys, "check-identity", "a21", "x + = x")
    assert code == 2
    assert "check-identity:" in err
    code, _, err = run(capsys, "check-identity", "brandt", "x + x = x")
    assert code == 2
    code, _, _ = run(capsys, "check-identity", "a21", "x y z = z y x", "--budget", "10")
    assert code == 2


def test_check_identity_on_a_file(capsys, tmp_path):
    path = tmp_path / "b21.json"
    assert run(capsys, "build", "b21", "-o", str(path))[0] == 0
    code, out, _ = run(capsys, "check-identity", str(path), "x + y = y + x")
    assert code == 0


def test_green(capsys):
    code, out, _ = run(capsys, "green", "brandt")
    assert code == 0
    assert out.startswith("brandt: 6 elements, 3 D-classes, 4 idempotents")
    assert "combinatorial: yes, regular: yes" in out
    assert "x^2 = x^3" in out


def test_kadourek(capsys):
    code, out, _ = run(capsys, "kadourek", "brandt")
    assert code == 0
    assert out.startswith("brandt: member of the variety generated by B21")

    code, out, _ = run(capsys, "kadourek", "a21")
    assert code == 1
    assert "not an inverse semigroup" in out


def test_kadourek_dropping_a_block(capsys):
    code, out, _ = run(capsys, "star", "sn:2", "--drop-dclass", "B1")
    assert code == 0
    code, out, _ = run(capsys, "kadourek", "sn:2")
    assert code == 1
    assert "condition (∗) fails" in out
    code, _, err = run(capsys, "kadourek", "sn:2", "--drop-dclass", "B9")
    assert code == 2
    assert "B9" in err


def test_sn_report(capsys):
    code, out, _ = run(capsys, "sn", "--n", "2")
    assert code == 0
    assert out.startswith("S_2: 103 elements")
    assert "D < C" in out

    code, out, _ = run(capsys, "--format", "machine", "sn", "--n", "2", "--report")
    assert json.loads(out)["report"]["blocks"]["C"] == {"size": 9, "idempotents": 3}


def test_verify_paper_selection(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "prop-3.2,catalog-sizes")
    assert code == 0
    assert "[PASS   ] prop-3.2" in out
    assert "[PASS   ] catalog-sizes" in out
    assert "[SKIPPED] axioms" in out

    code, out, _ = run(capsys, "--format", "machine", "vp", "--only", "prop-3.2", "--timing")
    doc = json.loads(out)
    assert doc["verdict"] == "pass"
    assert "elapsed" in next(c for c in doc["checks"] if c["name"] == "prop-3.2")


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "green", "foo")[0] == 2
    assert run(capsys, "verify-paper", "--only", "prop-9.9")[0] == 2
    assert run(capsys, "--config", str(tmp_path / "absent.yaml"), "green", "brandt")[0] == 2
    code, _, err = run(capsys, "--max-size", "50", "build", "end-chain:5")
    assert code == 2
    assert "max_size=50" in err
    with pytest.raises(SystemExit) as info:
        main(["nope"])
    assert info.value.code == 2


@pytest.mark.slow
def test_sn_violates_v2(capsys):
    code, out, _ = run(capsys, "check-identity", "sn:2", "v2 = v2'", "--budget", "200000000")
    assert code == 1
    assert "Counterexample" in out
