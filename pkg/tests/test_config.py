import json

import pytest

from zakharov_lab.errors import ConfigError
from zakharov_lab.harness.config import EXPERIMENTS, RunConfig, load_config, parse_config, validate_config


def test_defaults_round_trip():
    cfg = RunConfig()
    assert parse_config(cfg.to_json()) == cfg
    assert len(EXPERIMENTS) == 7


def test_partial_config_fills_defaults():
    cfg = validate_config({"experiment": "growth", "grid": {"M": 256}})
    assert cfg.grid.M == 256 and cfg.grid.L == RunConfig().grid.L


@pytest.mark.parametrize(
    "data, key",
    [
        ({"grid": {"M": 255}}, "grid.M"),
        ({"grid": {"L": -1}}, "grid.L"),
        ({"solver": {"dt": 0}}, "solver.dt"),
        ({"physics": {"s": 0.4}}, "physics.s"),
        ({"experiment": "nope"}, "experiment"),
        ({"seed": -1}, "seed"),
        ({"seed": 2**64}, "seed"),
        ({"bogus": 1}, "bogus"),
        ({"grid": {"m": 64}}, "grid.m"),
        ({"cutoff_scaling": {"b": 0.2, "b_prime": 0.3}}, "cutoff_scaling"),
    ],
)
def test_invalid_key_reported(data, key):
    with pytest.raises(ConfigError) as info:
        validate_config(data)
    assert info.value.key == key
    assert key in str(info.value)


def test_solver_span():
    with pytest.raises(ConfigError):
        validate_config({"solver": {"dt": 0.1, "T": 0.01}})


def test_not_an_object():
    with pytest.raises(ConfigError):
        parse_config("[1, 2]")
    with pytest.raises(ConfigError):
        parse_config("{not json")


def test_load_config(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"experiment": "strichartz", "seed": 7}))
    cfg = load_config(p)
    assert cfg.experiment == "strichartz" and cfg.seed == 7
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")


def test_overrides_ignore_none():
    cfg = RunConfig().with_overrides(seed=None, threads=3, experiment="growth")
    assert cfg.seed == 0 and cfg.threads == 3 and cfg.experiment == "growth"
    with pytest.raises(ConfigError):
        RunConfig().with_overrides(threads=0)
