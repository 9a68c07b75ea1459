import json

import pytest

from zakharov_lab.harness.cli import main

FAST = {"grid": {"L": 6.283185307179586, "M": 32}, "solver": {"dt": 0.01, "T": 0.05}, "data": {"amp": 0.1}}


def write(tmp_path, data, name="c.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_simulate_success(tmp_path, capsys):
    code = main(["simulate", "--config", write(tmp_path, FAST), "--out", str(tmp_path / "run")])
    assert code == 0
    assert "[PASS] finite" in capsys.readouterr().out
    manifest = json.loads((tmp_path / "run" / "manifest.json").read_text())
    assert manifest["experiment"] == "simulate" and manifest["seed"] == 0


def test_deterministic_outputs(tmp_path):
    cfgp = write(tmp_path, FAST)
    for d in ("a", "b"):
        assert main(["simulate", "--config", cfgp, "--out", str(tmp_path / d), "--seed", "5"]) == 0
    for name in ("diagnostics.csv", "summary.json", "manifest.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_seed_changes_data(tmp_path):
    cfgp = write(tmp_path, FAST)
    main(["simulate", "--config", cfgp, "--out", str(tmp_path / "a"), "--seed", "1"])
    main(["simulate", "--config", cfgp, "--out", str(tmp_path / "b"), "--seed", "2"])
    assert (tmp_path / "a" / "diagnostics.csv").read_bytes() != (tmp_path / "b" / "diagnostics.csv").read_bytes()


def test_config_error_exit_code(tmp_path, capsys):
    bad = write(tmp_path, {"grid": {"M": 33}})
    assert main(["simulate", "--config", bad, "--out", str(tmp_path / "x")]) == 2
    assert "grid.M" in capsys.readouterr().err
    assert main(["simulate", "--config", str(tmp_path / "missing.json")]) == 2


def test_domain_error_exit_code(tmp_path):
    cfgp = write(tmp_path, {**FAST, "physics": {"s": 0.8}})
    assert main(["growth", "--config", cfgp, "--out", str(tmp_path / "g")]) == 2


def test_failed_check_exit_code(tmp_path):
    data = {**FAST, "estimates": {"trials": 2, "octaves": [0, 1], "L": 100.0, "window_delta": 0.25, "max_spread": 1.0}}
    assert main(["strichartz", "--config", write(tmp_path, data), "--out", str(tmp_path / "s")]) == 1


def test_blowup_exit_code(tmp_path):
    data = {**FAST, "data": {"kind": "rough", "amp": 1e160}, "solver": {"dt": 0.1, "T": 1.0}}
    import numpy as np

    with np.errstate(all="ignore"):
        code = main(["simulate", "--config", write(tmp_path, data), "--out", str(tmp_path / "b")])
    assert code == 3
    summary = json.loads((tmp_path / "b" / "summary.json").read_text())
    assert summary["blowup"]["last_valid_time"] == 0.0


@pytest.mark.parametrize("argv", [["simulate", "--seed", "-1"], ["simulate", "--threads", "0"], ["nope"]])
def test_bad_arguments(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2
