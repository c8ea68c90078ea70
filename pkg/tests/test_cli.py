import json
import subprocess
import sys

import pytest

from parorbit.cli import main, run
from parorbit.exact import QQ, ExactMatrix


def out_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_classify(capsys):
    code, p = out_json(capsys, ["classify", "--bv", "2,2,2", "--json"])
    assert code == 0 and p["verdict"] == "infinite" and p["witness"]["case"] == [2, 2, 2]
    code, p = out_json(capsys, ["classify", "--bv", "5,4", "--json"])
    assert p["verdict"] == "finite"


def test_orbits_and_reps_file(capsys, tmp_path):
    f = tmp_path / "reps.json"
    code, p = out_json(capsys, ["orbits", "--bv", "1,1", "--q", "2", "--json", "--reps-out", str(f)])
    assert code == 0 and p["orbit_count"] == 2
    assert len(json.loads(f.read_text())) == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["classify", "--bv", "0,1"])
    assert e.value.code == 2
    assert main(["orbits", "--bv", "1,1"]) == 2
    assert main(["rep"]) == 2


def test_domain_error_exit_1(capsys):
    assert main(["family", "--name", "ext_kk"]) == 1
    assert "ParamOutOfRange" in capsys.readouterr().err


def test_certificate_failure_exit_1(capsys):
    assert main(["family", "--name", "e6_66", "--q", "5", "--certify", "--sample", "1,1", "--json"]) == 1


def test_family_certify(capsys):
    code, p = out_json(capsys, ["family", "--name", "e6_66", "--t", "3", "--q", "7", "--certify", "--json"])
    assert code == 0 and p["certificate"]["pass"] and p["certificate"]["sample"] == [3, 4, 5]


def test_normalize_deterministic(tmp_path, capsys):
    d = {"lambda": [4, 2, 1], "mu": [2, 1], "field": "Q",
         "gamma": {"1,1": ["-3", "6"], "1,2": ["2", "0"], "2,1": ["5", "-7"], "2,2": ["-4", "0"], "3,1": ["1", "1"]}}
    f = tmp_path / "d.json"
    f.write_text(json.dumps(d))
    main(["normalize", "--input", str(f), "--json"])
    a = capsys.readouterr().out
    main(["normalize", "--input", str(f), "--json"])
    b = capsys.readouterr().out
    assert a == b
    p = json.loads(a)
    assert p["reduced"] and p["case"] == "a"


def test_normalize_pair_formats(tmp_path, capsys):
    N = ExactMatrix.from_rows(QQ, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"bv": [1, 2], "N": N.to_json()}))
    code, p = out_json(capsys, ["normalize", "--input", str(f), "--json"])
    assert code == 0 and p["output"]["mu"] == [1]
    code, p = out_json(capsys, ["normalize", "--random-k", "5", "--q", "5", "--seed", "3", "--json"])
    assert p["reduced"]


def test_rep_round_trip(tmp_path, capsys):
    N = ExactMatrix.from_rows(QQ, [[0, 1, 1], [0, 0, 1], [0, 0, 0]])
    f = tmp_path / "m.json"
    f.write_text(json.dumps(N.to_json()))
    code, rep = out_json(capsys, ["rep", "--bv", "1,2", "--from-matrix", str(f), "--assert", "--json"])
    assert code == 0
    g = tmp_path / "r.json"
    g.write_text(json.dumps(rep))
    code, back = out_json(capsys, ["rep", "--to-matrix", str(g), "--json"])
    assert back["bv"] == [1, 2]


def test_distinguished_and_delta(tmp_path, capsys):
    code, p = out_json(capsys, ["distinguished", "--bv", "2", "--census", "--json"])
    assert p["count"] == 1
    from parorbit.quiver import standard_P
    f = tmp_path / "r.json"
    f.write_text(json.dumps(standard_P(QQ, 2, 2, 1, 1).to_json()))
    code, p = out_json(capsys, ["delta", "--input", str(f), "--json"])
    assert sorted(map(tuple, p["filtration"])) == [(1, 1), (2, 1)]


def test_run_returns_structured_result(capsys):
    code, res = run(["levi-classify", "--bv", "1,1,1"])
    assert code == 0 and res["payload"]["verdict"] == "infinite"
    assert "(" in capsys.readouterr().out


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "parorbit.cli", "classify", "--bv", "1,4,6", "--json"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["verdict"] == "infinite"
