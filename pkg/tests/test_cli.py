import json

import pytest

import cli
import config
from noise_model import InfeasibleParametersError


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_optimize_prints_json(capsys):
    code, out, _ = run(capsys, "optimize", "--variant", "PS", "--s-db", "-3", "--eta-h", "0.9")
    assert code == config.EXIT_OK
    result = json.loads(out)
    assert result["variant"] == "PS"
    assert result["s_db"] == pytest.approx(-3.0)
    assert result["eta_h"] == 0.9


def test_sweep_csv_to_file(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    code, out, _ = run(capsys, "sweep", "--variant", "PS", "--resource-db", "6", "--state", "vacuum",
                       "--s-db-min", "-1", "--s-db-step", "0.5", "--metrics", "fidelity,noise_product",
                       "--out", str(out_path))
    assert code == config.EXIT_OK
    assert out == ""
    lines = out_path.read_text().splitlines()
    assert lines[0].endswith("fidelity,N_P,status")
    assert len(lines) == 4


def test_config_file_with_flag_override(tmp_path, capsys):
    path = tmp_path / "run.cfg"
    path.write_text("variants = BS\nresource_db = 9\ns_db = -2\nformat = json\n")
    code, out, _ = run(capsys, "optimize", "--config", str(path), "--variant", "BAS")
    assert code == config.EXIT_OK
    assert json.loads(out)["variant"] == "BAS"


def test_bad_state_is_config_error(capsys):
    code, _, err = run(capsys, "optimize", "--variant", "PS", "--s-db", "-3", "--state", "coherent")
    assert code == config.EXIT_CONFIG
    report = json.loads(err.strip().splitlines()[-1])
    assert report["error"] == "ConfigError"
    assert report["exit_code"] == config.EXIT_CONFIG


def test_missing_target_is_config_error(capsys):
    code, _, _ = run(capsys, "photostat", "--variant", "PS")
    assert code == config.EXIT_CONFIG


def test_unknown_flag_exits_with_config_code():
    with pytest.raises(SystemExit) as exc:
        cli.main(["sweep", "--no-such-flag"])
    assert exc.value.code == config.EXIT_CONFIG


def test_infeasible_target_exit_code(capsys, monkeypatch):
    def infeasible(*args, **kwargs):
        raise InfeasibleParametersError("no BS circuit realizes s=0.1 inside the search bounds")

    monkeypatch.setattr(cli, "optimize_fidelity", infeasible)
    code, _, err = run(capsys, "optimize", "--variant", "BS", "--s-db", "-10")
    assert code == config.EXIT_INFEASIBLE
    assert json.loads(err.strip().splitlines()[-1])["error"] == "InfeasibleParametersError"


def test_oracle_check_command(capsys):
    code, out, _ = run(capsys, "oracle-check", "--grid-size", "8", "--seed", "4")
    assert code == config.EXIT_OK
    report = json.loads(out)
    assert report["ok"] and report["configs"] == 8


def test_photostat_csv(capsys):
    code, out, _ = run(capsys, "photostat", "--variant", "PS", "--state", "vacuum", "--s-db", "-3",
                       "--fock-dim", "30", "--quad-order", "30")
    assert code == config.EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "n,p_n"
    assert len(lines) == 31


def test_threshold_command(capsys):
    code, out, _ = run(capsys, "threshold", "--variant", "PS", "--eta-s", "0.8", "--eta-h", "0.9")
    assert code == config.EXIT_OK
    assert json.loads(out)["threshold_db"] == pytest.approx(-7.70, abs=0.1)


def test_oracle_tolerance_failure_names_worst_config(capsys, monkeypatch):
    worst = {"variant": "BSPS", "t1_sq": 0.3, "t2_sq": 0.6, "phi": 0.4, "t0_sq": 1.0,
             "resource_db": 9.0, "eta_s": 0.8, "eta_h": 0.9}

    def failing(grid_size, seed):
        return {"configs": grid_size, "seed": seed, "max_deviation": 1e-6, "tolerance": config.ORACLE_TOL,
                "ok": False, "worst_config": worst}

    monkeypatch.setattr(cli.sw, "run_oracle_check", failing)
    code, out, err = run(capsys, "oracle-check", "--grid-size", "4")
    assert code == config.EXIT_TOLERANCE
    assert json.loads(out)["ok"] is False
    report = json.loads(err.strip().splitlines()[-1])
    assert report["error"] == "ToleranceViolation"
    assert report["worst_config"] == worst


@pytest.mark.slow
@pytest.mark.parametrize("argv", [
    ("sweep", "--variant", "PS,BS", "--state", "single_photon", "--resource-db", "9",
     "--eta-s", "0.8", "--eta-h", "0.9", "--s-db-min", "-4", "--s-db-step", "1"),
    ("optimize", "--variant", "BSPS", "--s-db", "-5", "--seed", "42", "--eta-s", "0.8", "--eta-h", "0.9"),
])
def test_repeated_runs_are_byte_identical(tmp_path, capsys, argv):
    outputs = []
    for i in range(2):
        path = tmp_path / f"run{i}.out"
        assert cli.main([*argv, "--out", str(path)]) == config.EXIT_OK
        outputs.append(path.read_bytes())
    capsys.readouterr()
    assert outputs[0] == outputs[1]
