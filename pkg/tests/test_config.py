from pathlib import Path

import pytest

from simbench.config import MODE_MAX, MODE_REALTIME, SimConfig, load_config
from simbench.errors import ConfigError
from simbench.firmware import ControlLaw

DEFAULT_INI = Path(__file__).resolve().parents[1] / "configs" / "default.ini"


def test_default_ini_matches_builtin_defaults():
    assert load_config(DEFAULT_INI) == SimConfig()


def test_scheduler_ratios():
    cfg = SimConfig()
    assert cfg.steps_per_tick == 20
    assert cfg.steps_per_frame == 1000
    assert cfg.mode == MODE_MAX


def test_overrides(tmp_path):
    path = tmp_path / "bench.ini"
    path.write_text(
        "[sim]\n"
        "rpm_max = 100\n"
        "control = bang\n"
        "mode = realtime\n"
        "[gains]\n"
        "kp = 0.01\n"
        "[plant]\n"
        "v_supply = 24\n"
        "k_load = 0.005\n"
        "[net]\n"
        "port = 0\n"
        "[scope]\n"
        "slow_hz = 2000\n"
    )
    cfg = load_config(path)
    assert cfg.rpm_max == 100.0
    assert cfg.control is ControlLaw.BANG
    assert cfg.mode == MODE_REALTIME
    assert cfg.gains.kp == 0.01
    assert cfg.gains.ki == SimConfig().gains.ki
    assert cfg.plant.v_supply == 24.0
    assert cfg.k_load == 0.005
    assert cfg.port == 0
    assert cfg.scope_slow_hz == 2000.0
    # untouched blocks keep their defaults
    assert cfg.flex == SimConfig().flex
    assert cfg.dt_plant == SimConfig().dt_plant


def test_unknown_section_rejected(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[motor]\nv_supply = 12\n")
    with pytest.raises(ConfigError):
        load_config(path)


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[sim]\nspeed = 60\n")
    with pytest.raises(ConfigError):
        load_config(path)
    path.write_text("[plant]\nmass = 2\n")
    with pytest.raises(ConfigError):
        load_config(path)


def test_bad_values_rejected(tmp_path):
    path = tmp_path / "bad.ini"
    for body in (
        "[sim]\ncontrol = fuzzy\n",
        "[sim]\ndt_plant = 3e-05\n",       # 1/(dt*tick) not an integer
        "[sim]\nmode = turbo\n",
        "[net]\nport = 70000\n",
        "[net]\nport = 7777.5\n",
        "[gains]\nkp = -1\n",
        "[plant]\nv_supply = oops\n",
        "not ini at all",
    ):
        path.write_text(body)
        with pytest.raises(ConfigError):
            load_config(path)


def test_missing_file():
    with pytest.raises(ConfigError):
        load_config("/nonexistent/bench.ini")


def test_direct_validation():
    with pytest.raises(ConfigError):
        SimConfig(bang_duty=1.5)
    with pytest.raises(ConfigError):
        SimConfig(mode="turbo")
    with pytest.raises(ConfigError):
        SimConfig(dt_plant=-1e-5)
    with pytest.raises(ConfigError):
        SimConfig(port=65536)
    # tick faster than the plant step cannot be scheduled
    with pytest.raises(ConfigError):
        SimConfig(dt_plant=2e-3, tick_hz=1000.0)
