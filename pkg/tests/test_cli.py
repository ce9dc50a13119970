import json
import shutil
import subprocess
import sys

import pytest

from ade_belyi.cli import main
from support import DESSIN


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_hj_cf(capsys):
    assert run_json(capsys, "hj", "cf", "2,2,2") == {"m0": 4, "q": 3}


def test_hj_cf_with_unit_weight(capsys):
    out = run_json(capsys, "hj", "cf", "1,3")
    assert (out["m0"], out["q"]) == (2, 1) and out["unit_weights"]


def test_hj_chain_marked(capsys):
    out = run_json(capsys, "hj", "chain", "2,2,2", "--mark", "1")
    assert out["order"] == 4 and out["marked_generates"] is True


def test_hj_delta(capsys):
    assert run_json(capsys, "hj", "delta", "--n", "6", "--m", "3") == {"delta": 2, "residual": [2, 1]}


def test_belyi_passport(capsys):
    out = run_json(capsys, "belyi", "passport", "--h1", "1*x1^3", "--h2", "1*x2^3")
    assert out["c0"] == [3] and out["c1"] == [1, 1, 1] and out["cinf"] == [3]


def test_belyi_passport_of_triple(capsys):
    out = run_json(capsys, "belyi", "passport", "--s0", "(1 2)", "--s1", "(2 3)")
    assert out["c0"] == [2, 1] and out["c1"] == [2, 1] and out["cinf"] == [3]


def test_belyi_check(capsys):
    assert run_json(capsys, "belyi", "check", "--h1", DESSIN[0], "--h2", DESSIN[1])["belyi"] is True
    assert run_json(capsys, "belyi", "check", "--h1", "x1^3 - 3*x1*x2^2", "--h2", "x2^3") == {"belyi": False}


def test_catalog_e6_has_no_bel2_family(capsys):
    code, out, err = run(capsys, "catalog", "--type", "E6", "--bel2")
    assert code == 1 and out == ""
    assert json.loads(err)["error"] == "no-bel2-family"


def test_catalog_lists_and_builds(capsys):
    out = run_json(capsys, "catalog", "--type", "D6")
    assert [f["family"] for f in out["families"]] == [1, 2, 3]
    out = run_json(capsys, "catalog", "--type", "E7", "--m1", "1", "--m2", "3")
    assert (out["u"], out["v"]) == ("z^3", "z^2 + w^3")


def test_catalog_constraint_error(capsys):
    code, _, err = run(capsys, "catalog", "--type", "E7", "--m1", "1", "--m2", "2")
    assert code == 1 and json.loads(err)["error"] == "constraint-violated"


def test_type(capsys):
    out = run_json(capsys, "type", "--h1", DESSIN[0], "--h2", DESSIN[1], "--as", "E7")
    assert out["typed"] is True and out["type"] == "E7"


def test_fiber(capsys):
    out = run_json(capsys, "fiber", "--h1", "x1^2", "--h2", "x2^2", "--type", "A2")
    assert out["nonempty"] is False and out["witness"]


def test_verify(capsys):
    out = run_json(capsys, "verify", "--formula", json.dumps({"u": "z^3", "v": "z^2 + w^3"}))
    assert out["type"] == "E7"


def test_pullback(capsys):
    out = run_json(capsys, "pullback", "--type", "A5", "--branch", "B1,B2", "--degree", "2")
    assert out["ok"] is False
    assert out["covers"][0]["chain"] == [2, 2, 2, 2, 2]
    assert out["covers"][0]["marked_exponent"] == 3


def test_monodromy(capsys):
    # products compose left to right, so sinf inverts (1 2)(2 3) = (1 3 2)
    out = run_json(capsys, "monodromy", "--h1", DESSIN[0], "--h2", DESSIN[1])
    assert out == {"s0": "(1 2)", "s1": "(2 3)", "sinf": "(1 2 3)", "verified_cycle_types": True}


def test_d4_and_beta(capsys):
    c = run_json(capsys, "d4", "--h1", DESSIN[0], "--h2", DESSIN[1])
    assert c["degree"] == 9
    out = run_json(capsys, "beta", "--formula", json.dumps(c))
    assert out["h1"] == "-2*x1^3 + 3*x1^2*x2" and out["h2"] == "x2^3"


def test_resolve_json_and_dot(capsys):
    out = run_json(capsys, "resolve", "--type", "D4")
    assert [v["id"] for v in out["vertices"] if v["kind"] == "exceptional"] == ["E1"]
    assert out["center"] == "E1"
    code, dot, _ = run(capsys, "resolve", "--equation", "u^2 + v^3", "--dot")
    assert code == 0 and dot.startswith("graph")


@pytest.mark.parametrize("argv", [
    [],
    ["hj"],
    ["nonsense"],
    ["hj", "cf", "2,x"],
    ["belyi", "passport", "--h1", "x1^"],
    ["catalog"],
    ["type", "--h1", "x1", "--h2", "x2", "--as", "E6", "--dot"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == "usage"


def test_parse_error_reports_position(capsys):
    code, _, err = run(capsys, "belyi", "passport", "--h1", "x1 + x3", "--h2", "x2")
    assert code == 2
    assert json.loads(err)["position"] == 5
    code, _, err = run(capsys, "belyi", "passport", "--s0", "(1 2) x", "--s1", "(2 3)")
    assert code == 2 and json.loads(err)["position"] == 6


def test_domain_error_is_exit_one(capsys):
    code, _, err = run(capsys, "monodromy", "--h1", "x1^3 - 3*x1*x2^2", "--h2", "x2^3")
    assert code == 1 and json.loads(err)["error"]


def test_quiet(capsys):
    code, out, _ = run(capsys, "hj", "cf", "2,2", "--quiet")
    assert code == 0 and out == ""


def test_console_script():
    exe = shutil.which("ade-belyi")
    cmd = [exe] if exe else [sys.executable, "-m", "ade_belyi.cli"]
    res = subprocess.run(cmd + ["hj", "cf", "2,2,2"], capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout) == {"m0": 4, "q": 3}
    res = subprocess.run(cmd + ["catalog", "--type", "E6", "--bel2"], capture_output=True, text=True)
    assert res.returncode == 1


def test_beta_falls_back_to_unit_center(capsys):
    out = run_json(capsys, "beta", "--formula", json.dumps({"u": "z^2 + z^5", "v": "w^2 + z^3*w"}))
    assert out["center"] == [1, 1]
    assert (out["h1"], out["h2"]) == ("x1^2", "x2^2")


def test_beta_uses_center_of_branch_curve(capsys):
    out = run_json(capsys, "beta", "--formula", json.dumps({"u": "z^3", "v": "z^2 + w^3"}))
    assert out["center"] == [3, 2]
    assert out["passport"]["c0"] == [3]
