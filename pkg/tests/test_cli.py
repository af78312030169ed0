import json
import subprocess
import sys

import pytest

from freysymp.cli import run


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_invariants_json(capsys):
    code, out, _ = _run(capsys, "invariants", "--model", "0,-1,0,1,0", "--at", "2", "--json")
    assert code == 0
    d = json.loads(out)
    assert d["invariants"]["j"] == "2048/3"
    assert d["local"]["v_delta"] == 4 and d["local"]["v_c4"] == 5
    assert d["local"]["inertia_at_2"]["tag"] == "SL2F3"


def test_invariants_summary(capsys):
    code, out, _ = _run(capsys, "invariants", "--model", "0,-1,0,1,0", "--at", "3")
    assert code == 0 and "Multiplicative" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["invariants", "--model", "0,0,0,0,0"],
        ["invariants", "--model", "1,2"],
        ["invariants", "--model", "0,-1,0,1,0", "--at", "4"],
        ["frey", "--a", "2", "--b", "4"],
        ["classify", "--p", "21"],
        ["classify", "--range", "5", "100"],
        ["verify-lemma", "--p", "9"],
        ["density", "--conditions", "/nonexistent.json"],
    ],
)
def test_invalid_input_exit_2(capsys, argv):
    code, _, err = _run(capsys, *argv)
    assert code == 2 and err


def test_argparse_errors_exit_2(capsys):
    assert run(["classify"]) == 2
    assert run(["nosuchcommand"]) == 2


def test_frey(capsys):
    code, out, _ = _run(capsys, "frey", "--a", "2", "--b", "1", "--json")
    d = json.loads(out)
    assert code == 0 and d["model"] == "0,0,0,6,-7" and d["chain"]["twist"]["v3_dmin"] == 1
    code, out, _ = _run(capsys, "frey", "--a", "1", "--b", "1", "--json")
    assert code == 0 and json.loads(out)["chain"] is None


def test_classify(capsys):
    code, out, _ = _run(capsys, "classify", "--p", "17")
    assert code == 0 and "Eliminated" in out
    code, out, _ = _run(capsys, "classify", "--range", "17", "100", "--json")
    d = json.loads(out)
    assert d["eliminated"] == [17, 23, 29, 41, 47, 53, 59, 71, 83, 89]


def test_verify_lemma(capsys):
    code, out, _ = _run(capsys, "verify-lemma", "--p", "5", "--brute-force", "--json")
    d = json.loads(out)
    assert code == 0 and d["bruteforce_match"] and d["a4_check"]["image_class"] == "A4"
    code, out, _ = _run(capsys, "verify-lemma", "--pmax", "40", "--json")
    d = json.loads(out)
    assert code == 0 and len(d["reports"]) == 11 and not d["failures"]


def test_weil_and_aut(capsys):
    code, out, _ = _run(capsys, "weil-oracle", "--json")
    d = json.loads(out)
    assert code == 0 and d["passed"] and d["matrices_checked"] == 48
    code, out, _ = _run(capsys, "aut-f4", "--json")
    d = json.loads(out)
    assert code == 0 and len(d["automorphisms"]) == 24 and d["psi_image_class"] == "SL2F3"


def test_density(capsys, tmp_path):
    f = tmp_path / "c.json"
    f.write_text(json.dumps([{"modulus": 3, "residues": [2]}, {"modulus": 5, "residues": [2, 3]}]))
    code, out, _ = _run(capsys, "density", "--conditions", str(f), "--json")
    assert code == 0 and json.loads(out)["density"] == "3/4"
    f.write_text(json.dumps([{"modulus": 6, "residues": [3]}]))
    assert _run(capsys, "density", "--conditions", str(f))[0] == 2


def test_json_output_is_deterministic(capsys, tmp_path):
    argv = ["classify", "--range", "17", "200", "--json"]
    _, first, _ = _run(capsys, *argv)
    _, second, _ = _run(capsys, *argv)
    assert first == second
    out = tmp_path / "r.json"
    _run(capsys, *argv[:-1], "--out", str(out))
    assert out.read_text() == first


def test_entry_point_subprocess():
    r = subprocess.run(
        [sys.executable, "-m", "freysymp", "classify", "--p", "19"], capture_output=True, text=True
    )
    assert r.returncode == 0 and "Inconclusive" in r.stdout
    r = subprocess.run([sys.executable, "-m", "freysymp", "classify", "--p", "20"], capture_output=True, text=True)
    assert r.returncode == 2
