import pytest

from halg import config
from halg.errors import ConfigError


@pytest.fixture
def clean_env(monkeypatch):
    monkeypatch.setattr(config, "CONFIG_PROBLEMS", [])
    monkeypatch.delenv("HALG_TOL", raising=False)
    monkeypatch.delenv("HALG_SAMPLE", raising=False)
    return monkeypatch


def test_env_value_casts_and_defaults(clean_env):
    assert config.env_value("HALG_SAMPLE", int, 5) == 5
    clean_env.setenv("HALG_SAMPLE", " 12 ")
    assert config.env_value("HALG_SAMPLE", int, 5) == 12
    clean_env.setenv("HALG_SAMPLE", "")
    assert config.env_value("HALG_SAMPLE", int, 5) == 5
    config.check_config()


def test_malformed_value_falls_back_and_is_reported(clean_env):
    clean_env.setenv("HALG_SAMPLE", "abc")
    assert config.env_value("HALG_SAMPLE", float, 1.0) == 1.0
    assert config.CONFIG_PROBLEMS == ["HALG_SAMPLE='abc' is not a valid float"]
    with pytest.raises(ConfigError, match="HALG_SAMPLE"):
        config.check_config()


def test_tolerance_is_reread(clean_env):
    assert config.get_tolerance() == config.DEFAULT_TOLERANCE
    clean_env.setenv("HALG_TOL", "1e-6")
    assert config.get_tolerance() == 1e-6
    clean_env.setenv("HALG_TOL", "abc")
    with pytest.raises(ConfigError, match="HALG_TOL"):
        config.get_tolerance()
    with pytest.raises(ConfigError, match="HALG_TOL='abc'"):
        config.check_config()
