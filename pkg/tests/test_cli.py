import json
import subprocess
import sys

import pytest

from amplifiber.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), (json.loads(err) if err.strip() else None)


def test_instance_command(capsys):
    code, out, _ = run(capsys, "instance", "-n", "5", "-k", "2", "-m", "2")
    assert code == 0
    res = out["result"]
    assert res["chart"] == "ConjugateChart" and res["ell"] == 1
    assert out["config"]["seed"] == 0 and "version" in out


def test_bad_nodes_exit_2(capsys):
    code, out, err = run(capsys, "instance", "-n", "5", "-k", "2", "-m", "2", "--nodes", "1,3,2,4,5")
    assert code == 2 and out is None and err["error"]


def test_unsupported_fan_dimension_exit_2(capsys):
    code, _, err = run(capsys, "fan", "-n", "7", "-k", "1", "-m", "2")
    assert code == 2 and err["error"] == "UnsupportedError"


def test_wall_direction_exit_3(capsys):
    _, out, _ = run(capsys, "fan", "-n", "5", "-k", "2", "-m", "2")
    ray = out["result"]["fan"]["rays"][0]
    code, _, err = run(capsys, "canonical", "-n", "5", "-k", "2", "-m", "2", "--xi", ",".join(ray))
    assert code == 3 and err["error"] == "GenericityError" and 1 in err["wall"]


def test_fan_and_svg(capsys, tmp_path):
    svg = tmp_path / "fan.svg"
    code, out, _ = run(capsys, "fan", "-n", "5", "-k", "1", "-m", "2", "--svg", str(svg))
    assert code == 0 and len(out["result"]["fan"]["chambers"]) == 5
    text = svg.read_text()
    assert text.startswith("<svg") and text.count("<line") == 5


def test_canonical_pentagon(capsys):
    code, out, _ = run(capsys, "canonical", "-n", "5", "-k", "1", "-m", "2", "--seed", "3")
    res = out["result"]
    assert code == 0 and res["allChambersAgree"] and res["chambers"] == 5
    assert len({t["canonicalValue"] for t in res["triangulations"]}) == 1
    assert all(len(t["simplices"]) == 3 for t in res["triangulations"])


def test_point_file(capsys, tmp_path):
    _, out, _ = run(capsys, "fan", "-n", "6", "-k", "3", "-m", "2", "--seed", "2")
    point = tmp_path / "y.json"
    point.write_text(json.dumps({"Y": out["result"]["frame"]["Y"]}))
    _, again, _ = run(capsys, "fan", "-n", "6", "-k", "3", "-m", "2", "--point", str(point))
    assert again["result"]["fan"] == out["result"]["fan"]


def test_determinism_and_env_seed(capsys, monkeypatch, tmp_path):
    args = ("conjecture", "-n", "6", "-k", "3", "-m", "2", "--samples", "3")
    a = run(capsys, *args, "--seed", "7")[1]
    b = run(capsys, *args, "--seed", "7")[1]
    assert a == b and a["result"]["violations"] == []
    monkeypatch.setenv("AMPLIFIBER_SEED", "7")
    c = run(capsys, *args, "--seed", "1")[1]
    assert c["result"] == a["result"]
    dest = tmp_path / "r.json"
    assert main(list(args) + ["-o", str(dest)]) == 0
    assert json.loads(dest.read_text())["result"] == a["result"]


def test_identity_command(capsys):
    code, out, _ = run(capsys, "identity", "-n", "5", "-k", "2", "-m", "2", "--samples", "2")
    res = out["result"]
    assert code == 0 and all(v == 0 for v in res["failed"].values())
    code, out, _ = run(capsys, "identity", "-n", "6", "-k", "3", "-m", "2", "--samples", "1",
                       "--rule", "literal")
    assert out["result"]["failed"]["rayEntries"] > 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "amplifiber.cli", "instance", "-n", "5", "-k", "1",
                           "-m", "2"], capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["result"]["chart"] == "PolytopeChart"
