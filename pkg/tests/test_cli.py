import json
import math
import subprocess
import sys

import numpy as np
import pytest

from eulerfan import io as dio
from eulerfan.cli import main
from eulerfan.riemann1d import solve_middle
from eulerfan.verifier import verify_subsolution


def doc(c_v, left, right):
    k = ("rho", "u", "v", "p")
    return {"c_v": c_v, "left": dict(zip(k, left)), "right": dict(zip(k, right))}


CASE13 = doc(1.5, (1.0, 0.0, math.sqrt(1 / 3), 1.0), (1.0, 0.0, 0.0, 2.0))
CASE15 = doc(1.5, (1.0, 0.0, 0.5, 1.0), (1.0, 0.0, 0.0, 2.0))
WINDOW = doc(1.5, (1.0, 0.0, math.sqrt(0.99 / 3), 1.0), (1.0, 0.0, 0.0, 2.0))


@pytest.fixture
def run(tmp_path, capsys):
    def _run(*args, document=None):
        argv = list(args)
        if document is not None:
            path = tmp_path / "in.json"
            path.write_text(document if isinstance(document, str) else json.dumps(document))
            argv += ["--input", str(path)]
        code = main(argv)
        out, err = capsys.readouterr()
        return code, out, err

    return _run


def test_classify_equal_states(run):
    code, out, _ = run("classify", document=doc(1.5, (1, 0, 0, 1), (1, 0, 0, 1)))
    res = json.loads(out)
    assert code == 0 and res["row"] == 1 and res["description"] == "nothing"


def test_classify_case13(run):
    code, out, _ = run("classify", document=CASE13)
    res = json.loads(out)
    assert code == 0 and res["row"] == 13
    assert res["middle"]["rho_Mminus"] == pytest.approx(1.5, rel=1e-15)


@pytest.mark.parametrize(
    "bad, field",
    [
        ({"c_v": 1.5, "left": {"rho": 1, "u": 0, "v": 0, "p": 1}}, "right"),
        ({"c_v": 1.5, "left": {"rho": 1, "u": 0, "v": 0}, "right": {"rho": 1, "u": 0, "v": 0, "p": 1}}, "left.p"),
        ({"c_v": "x", "left": {}, "right": {}}, "c_v"),
        ({"left": {}, "right": {}}, "c_v"),
    ],
)
def test_malformed_document(run, bad, field):
    code, out, err = run("classify", document=bad)
    assert code == 2 and out == ""
    assert f"'{field}'" in err


def test_invalid_json(run):
    code, _, err = run("classify", document="{not json")
    assert code == 2 and "invalid JSON" in err


def test_domain_errors(run):
    assert run("classify", document=doc(0.4, (1, 0, 0, 1), (1, 0, 0, 1)))[0] == 3
    assert run("classify", document=doc(1.5, (1, 0, 0, -1), (1, 0, 0, 1)))[0] == 3
    code, _, err = run("solve1d", document=doc(1.5, (1, 0, -5, 1), (1, 0, 5, 1)))
    assert code == 3 and "vacuum" in err


def test_subsolution_find_and_verify(run, tmp_path):
    code, out, _ = run("subsolution", "find", document=WINDOW)
    assert code == 0
    res = json.loads(out)
    assert res["found"] and res["report"]["passed"]
    assert all(c["value"] > 0 for c in res["report"]["conditions"] if c["kind"] == "strict")
    code, out2, _ = run("subsolution", "verify", document=res)
    assert code == 0 and json.loads(out2)["passed"]
    # hand edit: nudge beta_1
    res["regions"][0]["beta"] += 1e-3
    code, out3, err = run("subsolution", "verify", document=res)
    assert code == 5
    violated = json.loads(out3)["violations"]
    assert violated and all(v in err for v in violated)


def test_subsolution_find_zero_velocity(run):
    code, out, err = run("subsolution", "find", document=doc(1.5, (1, 0, 0, 1), (1, 0, 0, 2)))
    assert code == 4
    res = json.loads(out)
    assert res["found"] is False and res["best"]


def test_subsolution_find_below_threshold(run):
    code, out, _ = run("subsolution", "find", document=CASE15)
    assert code == 4
    assert json.loads(out)["best"]["min_slack"] < 0


def test_patch(run):
    code, out, _ = run("patch", document=CASE15)
    res = json.loads(out)
    assert code == 0 and res["case"] == "case3" and res["verified"] and res["compatibility"] > 0
    q, gas = dio.quintuple_from_doc(res["fan"])
    assert verify_subsolution(q, gas).passed
    code, out, _ = run("patch", document=CASE13)
    assert code == 0 and json.loads(out)["case"] == "case4"
    code, out, _ = run("patch", document=doc(1.5, (1, 0, 0, 1), (1, 0, 0, 1)))
    assert code == 0 and json.loads(out) == {"assembled": False, "case": "case1_unique", "row": 1}


def test_threshold(run):
    code, out, _ = run("threshold", document=CASE15)
    res = json.loads(out)
    assert code == 0 and 0 < res["v_est"] < res["upper"]
    assert res["upper"] == pytest.approx(1 / 3)


def test_solve1d(run):
    code, out, _ = run("solve1d", "--samples", "101", document=CASE15)
    assert code == 0
    header, rows = dio.read_table(out)
    assert header == ["xi", "rho", "u", "v", "p"]
    assert len(rows) == 101
    assert rows[0][1:] == [1.0, 0.0, 0.5, 1.0]
    assert rows[-1][1:] == [1.0, 0.0, 0.0, 2.0]


def test_curves_intersection(run):
    code, out, _ = run("curves", "--samples", "2001", document=CASE15)
    assert code == 0
    header, rows = dio.read_table(out)
    assert header == ["p", "v_shock1", "v_wave3"]
    p, v1, v3 = np.array(rows).T
    assert np.all(np.diff(v1) < 0) and np.all(np.diff(v3) > 0)
    diff = v1 - v3
    k = int(np.nonzero(np.diff(np.sign(diff)))[0][0])
    # local cubic through four samples around the crossing
    idx = slice(k - 1, k + 3)
    x = np.log(p[idx])
    root = [r.real for r in np.roots(np.polyfit(x, diff[idx], 3)) if abs(r.imag) < 1e-12 and x[0] <= r.real <= x[-1]]
    assert len(root) == 1
    p_star = math.exp(root[0])
    v_star = np.polyval(np.polyfit(x, v1[idx], 3), root[0])
    m = solve_middle(dio.data_from_doc(CASE15))
    assert abs(p_star - m.p_M) < 1e-8
    assert abs(v_star - m.v_M) < 1e-8


def test_deterministic_output(run, tmp_path):
    for cmd in (["classify"], ["patch"], ["subsolution", "find"], ["curves"]):
        outs = []
        for i in range(2):
            path = tmp_path / f"out{i}"
            code, _, _ = run(*cmd, "--output", str(path), document=WINDOW)
            assert code == 0
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]


def test_argument_validation(run):
    with pytest.raises(SystemExit) as e:
        run("curves", "--samples", "1", document=CASE15)
    assert e.value.code == 2
    with pytest.raises(SystemExit):
        run("classify", "--tol-eq", "-1", document=CASE15)


def test_stdin_and_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "eulerfan.cli", "classify", "--input", "-"],
        input=json.dumps(CASE13),
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["row"] == 13
