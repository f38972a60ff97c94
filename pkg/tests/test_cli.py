import json
import math
import subprocess
import sys

import pytest

from snideal.cli import main
from snideal.matrix import unit
from snideal.mcn import MatrixTuple


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


@pytest.fixture
def row_tuple(tmp_path):
    p = tmp_path / "row.json"
    p.write_text(json.dumps(MatrixTuple([unit(1, 1, 2), unit(1, 2, 2)]).to_json()))
    return str(p)


def test_norm_and_dual(capsys):
    code, out, _ = run(capsys, "norm", "--spec", "schatten:2", "--seq", "3,4")
    assert code == 0 and out["value"] == 5.0 and out["seed"] == 0 and out["command"] == "norm"
    code, out, _ = run(capsys, "dual", "--spec", "kyfan:2", "--seq", "1,1,1")
    assert out["value"] == pytest.approx(1.5)
    code, out, _ = run(capsys, "norm", "--spec", "schatten:inf", "--seq", "1,2")
    assert out["value"] == 2.0


def test_mcn(capsys, row_tuple):
    code, out, _ = run(capsys, "mcn", "--phi", "schatten:inf", "--psi", "schatten:inf", "--tuple", row_tuple, "--seed", "4")
    assert code == 0 and out["value"] == pytest.approx(math.sqrt(2)) and out["exactness"] == "exact"
    assert out["seed"] == 4 and "witness_a" not in out
    assert out["closed_forms"]["oh"] == pytest.approx(2**0.25)
    code, out, _ = run(capsys, "mcn", "--phi", "schatten:2", "--psi", "schatten:2", "--tuple", row_tuple, "--witnesses", "--trace")
    assert "witness_a" in out and out["trace"]


def test_bad_inputs_exit_2(capsys, tmp_path, row_tuple):
    assert run(capsys, "norm", "--spec", "foo:1", "--seq", "1")[0] == 2
    assert run(capsys, "norm", "--spec", "schatten:2")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"m": 1, "n": 2, "matrices": [{"rows": 2, "cols": 2, "data": [1, 2, 3]}]}')
    code, _, err = run(capsys, "mcn", "--phi", "schatten:2", "--psi", "schatten:2", "--tuple", str(bad))
    assert code == 2 and "bad.json" in err
    bad.write_text("{not json")
    code, _, err = run(capsys, "mcn", "--phi", "schatten:2", "--psi", "schatten:2", "--tuple", str(bad))
    assert code == 2 and "line 1" in err
    assert run(capsys, "verify", "--campaign", "nope")[0] == 2
    assert run(capsys, "verify", "--campaign", "duality", "--param", "zzz=1")[0] == 2


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--campaign", "q_partition", "--param", "samples=20", "--summary-only")
    assert code == 0 and out["verdict"] == "pass" and "cases" not in out
    code, out, _ = run(capsys, "verify", "--campaign", "os_cross", "--param", "samples=20")
    assert code == 1 and out["witnesses"]
    code, out, _ = run(capsys, "verify", "--campaign", "duality", "--phi", "schatten:4", "--param", "tuples=1")
    assert out["params"]["phi"] == "schatten:4" and out["params"]["tuples"] == 1


def test_series_commands_csv(capsys, tmp_path):
    csv_path = tmp_path / "b.csv"
    code, out, _ = run(capsys, "boyd", "--spec", "schatten:3", "--n-max", "1000", "--emit-csv", str(csv_path))
    assert out["p_estimate"] == 3.0
    assert csv_path.read_text().splitlines()[0] == "n,log_n_over_log_phi"
    code, out, _ = run(capsys, "tensor-power", "--spec", "kyfan:2", "--x", "1,1", "--n-max", "4")
    assert [v for _, v in out["series"]] == pytest.approx([2 ** (1 / n) for n in range(1, 5)])
    code, out, _ = run(capsys, "verify", "--campaign", "tensor_power", "--param", "n_max=4", "--emit-csv", str(csv_path))
    assert len(csv_path.read_text().splitlines()) == 5
    assert run(capsys, "verify", "--campaign", "q_partition", "--param", "samples=2", "--emit-csv", str(csv_path))[0] == 2


def test_multiplicator_cb_row_oracle(capsys, row_tuple):
    assert run(capsys, "multiplicator", "--x", "1,1", "--phi", "kyfan:2", "--psi", "kyfan:2")[1]["value"] == pytest.approx(2.0)
    assert run(capsys, "cb-row", "--x", "1,1", "--phi", "schatten:1", "--psi", "schatten:1")[1]["value"] == pytest.approx(2**0.5)
    out = run(capsys, "oracle", "--phi", "schatten:2", "--psi", "schatten:2", "--tuple", row_tuple)[1]
    assert out["value"] == pytest.approx(2**0.25, abs=1e-6)


def test_out_and_config(capsys, tmp_path):
    dest = tmp_path / "o.json"
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# defaults\nspec = schatten:2\nseq = 3,4\nseed = 9\n")
    assert main(["norm", "--config", str(cfg), "--out", str(dest)]) == 0
    assert capsys.readouterr().out == ""
    got = json.loads(dest.read_text())
    assert got["value"] == 5.0 and got["seed"] == 9
    assert main(["norm", "--config", str(cfg), "--seed", "1", "--out", str(dest)]) == 0
    assert json.loads(dest.read_text())["seed"] == 1
    cfg.write_text("colour = red\n")
    assert main(["norm", "--config", str(cfg)]) == 2


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "snideal.cli", "norm", "--spec", "kyfan:2", "--seq", "3,1,1"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["value"] == 4.0
