import json
import subprocess
import sys

import pytest

from breather.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_help_documents_exit_codes(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0 and "exit codes" in out and "usage error" in out


def test_eps_series_sine(capsys):
    code, out, _ = run(capsys, "eps-series", "--preset", "sine", "--order", "3")
    assert code == 0
    assert "k=1 q=1 S" in out and "k=3 q=3 -1/192*S^3" in out and "sigma_2 pending" in out


def test_eps_series_order_one(capsys):
    code, out, _ = run(capsys, "eps-series", "--preset", "sine", "--order", "1")
    assert code == 0 and [ln for ln in out.splitlines() if not ln.startswith("#")] == ["k=1 q=1 S"]


def test_eps_series_lambda_error(capsys):
    code, _, err = run(capsys, "eps-series", "--preset", "custom", "--g2", "0", "--g3", "0")
    assert code == 1 and "<= 0" in err


def test_eps_series_json(capsys):
    code, out, _ = run(capsys, "eps-series", "--preset", "phi4", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["lambda"] == "3/2" and d["orders"][1]["harmonics"]["0"] == "-3/4*S^2"


def test_conditions_symbolic_odd(capsys):
    code, out, _ = run(capsys, "conditions", "--odd", "--g3", "-1/6", "--symbolic", "g5,g7,g9",
                       "--L", "9", "--format", "json")
    rows = json.loads(out)
    assert code == 0
    keys = {(r["l"], r["q"], r["w0"]) for r in rows}
    assert {(7, 1, "-1/2"), (7, 5, "-1"), (9, 3, "-1/9"), (9, 7, "-3/2")} <= keys


def test_conditions_sine_empty(capsys):
    code, out, _ = run(capsys, "conditions", "--preset", "sine", "--L", "9", "--format", "json")
    assert code == 0 and json.loads(out) == []


def test_conditions_phi4_real_pole(capsys):
    code, out, _ = run(capsys, "conditions", "--preset", "phi4", "--L", "2", "--format", "json")
    assert code == 0 and [(r["w0"], r["eps_label"]) for r in json.loads(out)] == [("1/4", "1/2")]


def test_decimal_rejected(capsys):
    code, _, err = run(capsys, "conditions", "--odd", "--g3", "-0.16", "--symbolic", "g5")
    assert code == 2 and "exact fraction" in err


def test_symbol_caps(capsys):
    code, _, err = run(capsys, "conditions", "--odd", "--g3", "-1/6", "--symbolic", "g5,g7,g9,g11", "--L", "9")
    assert code == 2
    code, _, _ = run(capsys, "conditions", "--odd", "--g3", "-1/6", "--symbolic", "g5", "--L", "11")
    assert code == 2


def test_poles(capsys):
    code, out, _ = run(capsys, "poles", "--L", "7")
    assert code == 0 and "5 3 -1/2 i/√2" in out and "7 5 -1 i" in out


def test_exp_series_dump(capsys):
    code, out, _ = run(capsys, "exp-series", "--odd", "--symbolic", "g3", "--L", "3")
    assert code == 0 and "l=3 q=3 1/32*(g3)" in out


def test_majorant(capsys):
    code, out, _ = run(capsys, "majorant", "--preset", "sinh", "--eps", "1/10,1/4", "--L", "2", "--format", "json")
    d = json.loads(out)
    assert code == 0 and all(x["verdict"] and x["equal_everywhere"] for x in d)


def test_solve_and_manifest(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    traj, man = tmp_path / "t.txt", tmp_path / "m.json"
    code, out, _ = run(capsys, "solve", "--preset", "sinh", "--eps", "0.3", "--s", "2", "--N", "400",
                       "--trajectory", str(traj), "--manifest", str(man))
    assert code == 0 and "converged=true" in out
    m = json.loads(man.read_text())
    assert m["timestamp"] == "2023-11-14T22:13:20Z" and m["parameters"]["N"] == 400
    first = man.read_text(), traj.read_text()
    run(capsys, "solve", "--preset", "sinh", "--eps", "0.3", "--s", "2", "--N", "400",
        "--trajectory", str(traj), "--manifest", str(man))
    assert (man.read_text(), traj.read_text()) == first


def test_solve_rejects_even_preset(capsys):
    code, _, err = run(capsys, "solve", "--preset", "phi4")
    assert code == 1 and "odd" in err


def test_solve_spectral_gap(capsys):
    code, _, err = run(capsys, "solve", "--eps", "0.95")
    assert code == 1 and "8/9" in err


def test_compare_linear(capsys):
    code, out, _ = run(capsys, "compare", "--preset", "linear", "--N", "400", "--format", "json")
    assert code == 0 and json.loads(out)["max_rel"] < 1e-12


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# solver defaults\neps = 0.5\nN = 300\npreset = sinh\n")
    code, out, _ = run(capsys, "solve", "--config", str(cfg), "--N", "200", "--format", "json")
    m = json.loads(out)
    assert code == 0 and m["parameters"]["eps"] == 0.5 and m["parameters"]["N"] == 200


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("no equals sign here\n")
    code, _, err = run(capsys, "solve", "--config", str(cfg))
    assert code == 2
    code, _, _ = run(capsys, "solve", "--config", str(tmp_path / "missing.cfg"))
    assert code == 2


def test_unknown_flag(capsys):
    assert run(capsys, "poles", "--nonsense")[0] == 2


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "breather.cli", "poles", "--L", "2"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "2 0 1/4 1/2" in out.stdout
