import json
import subprocess
import sys

import pytest

from polyhom.cli import run

PRESETS = {
    "expand": ["expand"],
    "expand_example": ["expand", "--n", "2", "--K", "8", "--forcing", "3:1", "--free", "3=0"],
    "ball": ["ball"],
    "cex": ["cex"],
    "cex_random": ["cex", "--seed", "7", "--kmax", "8", "--growth", "symbolic_bound"],
    "oracle": ["oracle"],
}


def invoke(argv, out, capsys):
    code = run(argv + ["--out", str(out)])
    return code, capsys.readouterr().out


def test_expand_example(tmp_path, capsys):
    code, text = invoke(PRESETS["expand_example"], tmp_path, capsys)
    assert code == 0
    report = json.loads(text)
    assert {"i": 3, "j": 1, "c": "1/4"} in report["series"]["terms"]
    assert report["N"] == {"3": 1}
    assert json.loads((tmp_path / "expand.json").read_text()) == report
    assert (tmp_path / "expand.csv").read_text().splitlines()[1] == "3,1,1/4"


def test_ball_example(tmp_path, capsys):
    code, text = invoke(["ball", "--n", "2", "--K", "10"], tmp_path, capsys)
    report = json.loads(text)
    assert code == 0 and report["expansion_zero"] is True and report["c_n1_log"] == "0"
    assert len(report["residuals"]) == 20


def test_cex_example(tmp_path, capsys):
    code, text = invoke(["cex", "--n", "2", "--seed-poly", "d:1", "--kmax", "6"], tmp_path, capsys)
    report = json.loads(text)
    assert code == 0
    assert report["terminated_at"] == 2 and report["residual_zero"] is True
    assert (tmp_path / "cex_ledger.csv").exists()


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "problem.cfg"
    cfg.write_text("# n=3 with a resonant forcing\nn=3\nK=7\nforcing.4=2\nfree.4=1\n")
    code, text = invoke(["expand", "--config", str(cfg)], tmp_path, capsys)
    report = json.loads(text)
    assert code == 0 and report["first_log_coefficient"] == "2/5"
    assert {"i": 4, "j": 0, "c": "1/1"} in report["series"]["terms"]


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["expand", "--config", "/no/such/file"],
    ["expand", "--forcing", "3:x"],
    ["expand", "--free", "2=1"],
    ["expand", "--set", "colour=blue"],
    ["ball", "--grid-points", "1", "--n", "1"],
    ["diagnose", "--input", "/no/such.csv"],
    ["oracle", "--t0", "1e-5"],
])
def test_invalid_input_exits_2(argv, tmp_path, capsys):
    assert invoke(argv, tmp_path, capsys)[0] == 2


def test_numeric_failure_exits_3(tmp_path, capsys):
    assert invoke(["oracle", "--max-condition", "10"], tmp_path, capsys)[0] == 3


@pytest.mark.parametrize("name", list(PRESETS))
def test_byte_identical_reruns(name, tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert invoke(PRESETS[name], a, capsys)[0] == 0
    assert invoke(PRESETS[name], b, capsys)[0] == 0
    files = sorted(p.name for p in a.iterdir())
    assert files == sorted(p.name for p in b.iterdir())
    for f in files:
        assert (a / f).read_bytes() == (b / f).read_bytes()


def test_expand_diagnose_roundtrip(tmp_path, capsys):
    _, text = invoke(["expand", "--n", "3", "--K", "12", "--forcing", "1:1,2:-1,4:3",
                      "--nonlinearity", "model", "--C1", "0:-1"], tmp_path, capsys)
    norms = json.loads(text)["order_norms"]
    code, text = invoke(["diagnose", "--input", str(tmp_path / "expand.json")], tmp_path, capsys)
    assert code == 0
    assert json.loads(text)["norms"] == norms


def test_diagnose_csv(tmp_path, capsys):
    import math
    csv = tmp_path / "norms.csv"
    csv.write_text("k,norm\n" + "".join(f"{k},{math.factorial(k) ** 2}\n" for k in range(1, 16)))
    code, text = invoke(["diagnose", "--input", str(csv)], tmp_path, capsys)
    fit = json.loads(text)["fit"]
    assert code == 0 and fit["classification"] == "GEVREY"
    assert abs(fit["gevrey_order"] - 2.0) < 0.1


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "polyhom", "cex", "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["command"] == "cex"
