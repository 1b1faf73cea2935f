import json

import numpy as np
import pytest

from tpic import io
from tpic.cli import parse_points, run
from tpic.exceptions import BadZeroSet


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify(capsys):
    code, out, _ = call(capsys, "classify", "--dim", "4")
    doc = json.loads(out)
    assert code == 0 and doc["count"] == 5 and len(doc["classes"]) == 5
    code, out, _ = call(capsys, "classify", "--dim", "4", "--format", "text")
    assert out.rstrip().endswith("5 inequivalent classes")


@pytest.mark.parametrize("argv", [
    ["classify", "--dim", "1"],
    ["classify"],
    ["bogus"],
    ["construct", "task-cex", "--dim", "4", "--t1", "2"],
    ["construct", "premise-cex", "--dim", "4"],
    ["weyl", "fiducial", "--dim", "5", "--zeros", "1,0"],
    ["weyl", "fiducial", "--dim", "5", "--zeros", "a,b"],
    ["weyl", "analyze-pair", "--dim", "9", "--point", "1,0"],
    ["weyl", "analyze-single", "--dim", "5", "--point", "1,0"],
    ["weyl", "covariant"],
])
def test_domain_errors_exit_1(capsys, argv):
    assert call(capsys, *argv)[0] == 1


def test_format_errors_exit_3(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 4, "effects": [')
    assert call(capsys, "check", str(bad), "--t", "1", "--p", "1")[0] == 3
    assert call(capsys, "validate", str(tmp_path / "missing.json"))[0] == 3
    bad.write_text('{"dim": 2, "re": [[1, 0]], "im": [[0, 0]]}')
    assert call(capsys, "validate", str(bad))[0] == 3


def test_construct_check_round_trip(capsys, tmp_path):
    f = tmp_path / "obs.json"
    code, out, _ = call(capsys, "construct", "minimal-d4", "--kind", "pure-vs-all", "--out", str(f))
    summary = json.loads(out)
    assert code == 0 and summary["outcomes"] == 11 and summary["annihilator_dim"] == 5
    code, out, _ = call(capsys, "validate", str(f))
    assert code == 0 and json.loads(out)["valid"] and json.loads(out)["outcomes"] == 11
    code, out, _ = call(capsys, "check", str(f), "--t", "1", "--p", "4")
    assert code == 0 and json.loads(out)["status"] == "CERTIFIED_YES"
    code, out, _ = call(capsys, "check", str(f), "-t", "2", "-p", "2")
    v = json.loads(out)
    assert code == 0 and v["status"] == "CERTIFIED_NO" and v["witness"] is not None


def test_output_is_byte_stable(capsys, tmp_path):
    outs = []
    for k in range(2):
        f = tmp_path / f"tau{k}.json"
        call(capsys, "weyl", "fiducial", "--dim", "5", "--zeros", "1,2;4,3", "--out", str(f))
        outs.append(f.read_bytes())
    assert outs[0] == outs[1]
    a = call(capsys, "construct", "nprime")[1]
    b = call(capsys, "construct", "nprime")[1]
    assert a == b


def test_invalid_observable_exits_1(capsys, tmp_path):
    f = tmp_path / "bad.json"
    e = np.eye(2) / 3
    io.save_file(f, {"dim": 2, "effects": [{"label": "a", **{k: v for k, v in io.matrix_to_json(e).items() if k != "dim"}}]})
    assert call(capsys, "validate", str(f))[0] == 1
    assert call(capsys, "check", str(f), "--t", "1", "--p", "1")[0] == 1


def test_weyl_pipeline(capsys, tmp_path):
    tau = tmp_path / "tau.json"
    assert call(capsys, "weyl", "fiducial", "--dim", "4", "--zeros", "0,1;0,3", "-o", str(tau))[0] == 0
    code, out, _ = call(capsys, "validate", str(tau))
    assert code == 0 and json.loads(out)["kind"] == "state"
    code, out, _ = call(capsys, "weyl", "zero-set", "--state", str(tau))
    assert json.loads(out)["points"] == [[0, 1], [0, 3]]
    obs = tmp_path / "cov.json"
    code, out, _ = call(capsys, "weyl", "covariant", "--state", str(tau), "-o", str(obs))
    assert code == 0 and json.loads(out)["annihilator_dim"] == 2
    noise = tmp_path / "noise.json"
    io.save_file(noise, {"dim": 4, "weights": (np.eye(4)[0][:, None] * np.eye(4)[0]).tolist()})
    smeared = tmp_path / "s.json"
    assert call(capsys, "weyl", "smear", "--state", str(tau), "--noise", str(noise), "-o", str(smeared))[0] == 0
    assert np.allclose(io.matrix_from_json(io.load_file(smeared)),
                       io.matrix_from_json(io.load_file(tau)))


def test_symmetrize_flag(capsys):
    assert call(capsys, "weyl", "fiducial", "--dim", "5", "--zeros", "1,2")[0] == 1
    code, out, _ = call(capsys, "weyl", "fiducial", "--dim", "5", "--zeros", "1,2", "--symmetrize")
    assert code == 0
    z = parse_points("1,2", 5, symmetrize=True)
    assert z.sorted() == [(1, 2), (4, 3)]
    with pytest.raises(BadZeroSet):
        parse_points("1,2,3", 5)


def test_analyze(capsys):
    code, out, _ = call(capsys, "weyl", "analyze-single", "--dim", "6", "--point", "3,0")
    doc = json.loads(out)
    assert code == 0 and doc["certified_t"] == [1, 2] and doc["refuted_t"][0] == 3
    code, out, _ = call(capsys, "weyl", "analyze-pair", "--dim", "5", "--point", "1,2",
                        "--theta-grid", "90")
    doc = json.loads(out)
    assert code == 0 and doc["cosine_agreement"] and doc["certified_t"] == [1]
    assert doc["refuted_t"] == [2, 3, 4, 5]


def test_tol_flag(capsys, tmp_path):
    f = tmp_path / "obs.json"
    e = np.eye(2) / 2 * (1 + 1e-7)
    eff = {k: v for k, v in io.matrix_to_json(e).items() if k != "dim"}
    io.save_file(f, {"dim": 2, "effects": [{"label": "a", **eff}, {"label": "b", **eff}]})
    assert call(capsys, "validate", str(f))[0] == 1
    assert call(capsys, "validate", str(f), "--tol", "1e-5")[0] == 0


def test_unresolved_exit_2(capsys, tmp_path):
    # one random trial is not enough to find the rank-2 elements of this annihilator
    from tpic.constructions import minimal_d4_observable
    f = tmp_path / "obs.json"
    io.save_file(f, io.observable_to_json(minimal_d4_observable("pure-vs-pure-upper")))
    code, out, _ = call(capsys, "check", str(f), "--t", "1", "--p", "1", "--trials", "1")
    assert code == 2 and json.loads(out)["status"] == "UNRESOLVED"
