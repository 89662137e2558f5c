import csv
import io
import json
import math
import subprocess
import sys

import pytest

from tristeer.cli import RunConfig, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def eval_value(capsys, *argv):
    code, out, _ = run(capsys, "eval", *argv)
    assert code == 0
    first, record = out.splitlines()
    return float(first), json.loads(record)


def test_eval_ghz_optimum(capsys):
    value, record = eval_value(capsys, "--ineq", "g1", "--family", "gghz", "--theta", "0.7854")
    assert value == pytest.approx(-0.845, abs=1e-3)
    assert record["value"] == pytest.approx(value, abs=1e-8)
    assert record["scenario"] == "1->2" and record["success_probability"] == 1.0


def test_eval_zero_damping_is_no_op(capsys):
    plain, _ = eval_value(capsys, "--ineq", "g1", "--family", "gghz", "--theta", "0.7854")
    damped, _ = eval_value(capsys, "--ineq", "g1", "--family", "gghz", "--theta", "0.7854",
                           "--channel", "ad", "--p", "0", "--topo", "1")
    assert damped == plain


def test_eval_w2_optimum(capsys):
    value, _ = eval_value(capsys, "--ineq", "w2", "--family", "w1p", "--d0", "0.5774")
    assert value == pytest.approx(-0.480, abs=1e-3)


def test_eval_filtered(capsys):
    value, record = eval_value(capsys, "--ineq", "g1", "--family", "gghz", "--theta", "0.15", "--filter", "bc")
    assert value == pytest.approx(-0.845, abs=2e-3)
    assert record["success_probability"] == pytest.approx(2 * math.sin(0.15) ** 2)


def test_config_echo_round_trips(capsys):
    argv = ["--ineq", "g2", "--family", "gghz", "--theta", "0.5", "--channel", "bf", "--p", "0.2",
            "--topo", "3", "--scenario", "2->1", "--filter", "c"]
    _, record = eval_value(capsys, *argv)
    cfg = RunConfig.from_dict(record["config"])
    assert cfg.to_dict() == record["config"]
    assert cfg.inequality == "g2" and cfg.topology == [3] and cfg.params == {"theta": "0.5"}
    again, _ = eval_value(capsys, *argv)
    assert again == pytest.approx(record["value"], abs=1e-8)


def test_dual_config_round_trips(capsys):
    _, record = eval_value(capsys, "--ineq", "g1", "--family", "gghz", "--theta", "0.9",
                           "--dual", "pd,0.5", "pf", "--p", "0.1", "--topo", "2")
    cfg = RunConfig.from_dict(json.loads(json.dumps(record["config"])))
    assert cfg == RunConfig.from_dict(record["config"])
    assert cfg.dual == ["pd", 0.5, "pf"]


@pytest.mark.parametrize("argv", [
    ["eval", "--ineq", "g2", "--family", "gghz", "--theta", "0.5", "--scenario", "1->2"],
    ["eval", "--ineq", "g2", "--family", "gghz", "--theta", "0.5", "--filter", "bc"],
    ["eval", "--ineq", "g1", "--family", "gghz", "--d0", "0.5"],
    ["eval", "--ineq", "g1", "--family", "gghz", "--theta", "2.0"],
    ["eval", "--ineq", "g1", "--family", "gghz", "--theta", "0.5", "--channel", "pd", "--p", "1.5"],
    ["eval", "--ineq", "g1", "--family", "gghz", "--theta", "0.5", "--p", "0.3"],
    ["eval", "--ineq", "g1", "--family", "gghz", "--theta", "0.5", "--topo", "4"],
    ["eval", "--ineq", "g1", "--family", "gghz", "--theta", "0.5", "--dual", "pd,0.5", "pf", "--channel", "ad"],
    ["eval", "--ineq", "g1", "--family", "gghz", "--theta", "0.5", "--dual", "xx,0.5", "pf"],
    ["eval", "--ineq", "g1", "--family", "gghz", "--theta", "abc"],
    ["sweep", "--ineq", "g1", "--family", "gghz", "--theta", "0.5"],
    ["ineq"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--ineq", "g9", "--family", "gghz"])
    assert exc.value.code == 2


def test_unwritable_output_exits_1(capsys, tmp_path):
    target = tmp_path / "missing" / "out.csv"
    code, _, err = run(capsys, "sweep", "--ineq", "g1", "--family", "gghz", "--theta", "0.5",
                       "--channel", "ad", "--p", "0:1:3", "--out", str(target))
    assert code == 1 and "I/O error" in err


def read_csv(path):
    raw = path.read_bytes().decode()
    return raw, list(csv.reader(io.StringIO(raw, newline="")))


def test_sweep_csv_format(capsys, tmp_path):
    out = tmp_path / "grid.csv"
    code, _, _ = run(capsys, "sweep", "--ineq", "g1", "--family", "gghz", "--theta", "0.19:0.785:4",
                     "--channel", "ad", "--p", "0:1:5", "--out", str(out))
    assert code == 0
    raw, rows = read_csv(out)
    assert rows[0] == ["theta", "p", "value", "success_probability"]
    assert len(rows) == 1 + 4 * 5
    assert raw.count("\r\n") == len(rows)
    for row in rows[1:]:
        assert row[3] == "1"
        digits = row[2].lstrip("-").replace(".", "").split("e")[0].lstrip("0")
        assert len(digits) <= 9
        float(row[2])


def test_one_by_one_sweep_equals_eval(capsys, tmp_path):
    out = tmp_path / "one.csv"
    args = ["--ineq", "w1", "--family", "wclass", "--c0", "0.3", "--c1", "0.5", "--channel", "bf",
            "--p", "0.2", "--topo", "2"]
    run(capsys, "sweep", *args, "--out", str(out))
    _, rows = read_csv(out)
    value, _ = eval_value(capsys, *args)
    assert len(rows) == 2
    assert float(rows[1][2]) == value


def test_c1_axis_sweep_shows_revival_band(capsys, tmp_path):
    out = tmp_path / "band.csv"
    run(capsys, "sweep", "--ineq", "w1", "--family", "wclass", "--c0", "0.3", "--c1", "0.2:0.6:5",
        "--channel", "pf", "--p", "0:1:101", "--topo", "3", "--out", str(out))
    _, rows = read_csv(out)
    assert rows[0][0] == "c1"
    signs = [float(r[2]) < 0 for r in rows[1:] if r[0] == "0.5"]
    assert len(signs) == 101
    assert signs[0] and signs[-1] and not all(signs)


def test_sweep_json_and_missing_values(capsys):
    code, out, _ = run(capsys, "sweep", "--ineq", "g1", "--family", "gghz", "--theta", "0.5:1.0:2",
                       "--channel", "pd", "--p", "0:1:2", "--filter", "bc", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["state_param"] == "theta"
    missing = [r for r in doc["records"] if r["value"] is None]
    assert len(missing) == 2 and all(r["state_param"] == 1.0 for r in missing)


def test_sweep_csv_empty_cells_for_missing(capsys):
    code, out, _ = run(capsys, "sweep", "--ineq", "g1", "--family", "gghz", "--theta", "0.5:1.0:2",
                       "--channel", "pd", "--p", "0:1:2", "--filter", "bc")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[-1][2:] == ["", ""]


def test_thresholds_pd_table(capsys):
    code, out, _ = run(capsys, "thresholds", "--ineq", "g1", "--family", "gghz", "--theta", str(math.pi / 3),
                       "--channel", "pd", "--topo", "1,2,3")
    assert code == 0
    got = [r["p_collapse"] for r in json.loads(out)["reports"]]
    assert got == pytest.approx([0.82, 0.58, 0.44], abs=0.01)


def test_thresholds_delta_table(capsys):
    code, out, _ = run(capsys, "thresholds", "--ineq", "g1", "--family", "gghz", "--theta", str(math.pi / 6),
                       "--channel", "ad", "--topo", "1,2,3", "--filter", "bc", "--delta")
    assert code == 0
    got = [r["delta"]["delta_p_c"] for r in json.loads(out)["reports"]]
    assert got == pytest.approx([0.17, 0.13, 0.10], abs=0.01)


def test_thresholds_never_steerable(capsys):
    code, out, _ = run(capsys, "thresholds", "--ineq", "g1", "--family", "gghz", "--theta", "0.1",
                       "--channel", "ad")
    assert code == 0
    assert json.loads(out)["reports"][0]["status"] == "never steerable"


def test_ineq_and_schema(capsys):
    code, out, _ = run(capsys, "ineq", "w2")
    assert code == 0 and len(json.loads(out)["terms"]) == 19
    code, out, _ = run(capsys, "ineq", "--schema")
    assert json.loads(out)["title"] == "SteeringInequality"


def test_reproduce_single_criterion(capsys):
    code, out, _ = run(capsys, "reproduce", "--criterion", "1")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 5 and all(l.startswith("[PASS]") for l in lines[:4])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tristeer", "eval", "--ineq", "g1", "--family", "gghz",
                           "--theta", "0.7854"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert float(proc.stdout.splitlines()[0]) == pytest.approx(-0.8453, abs=1e-4)
