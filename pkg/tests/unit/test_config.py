"""Unit tests for configuration files and experiment settings."""

import pytest

from skewer_lab.database.models import Construction, ExperimentConfig, InitialLaw
from skewer_lab.utils.config import (
    ConfigError,
    dump_config,
    load_config_file,
    parse_config_text,
    worker_count,
)


def test_parse_config_text():
    """Test key=value parsing with comments and dashes."""
    text = """
    # experiment
    scale-unit = 0.01
    paths=20  # inline comment

    construction = interweaving
    """
    assert parse_config_text(text) == {
        "scale_unit": "0.01",
        "paths": "20",
        "construction": "interweaving",
    }


@pytest.mark.parametrize("text", ["paths 20", "= 3"])
def test_parse_config_text_errors(text):
    """Test that malformed lines are reported."""
    with pytest.raises(ConfigError):
        parse_config_text(text)


def test_config_file_round_trip(tmp_path):
    """Test dumping and loading a config file."""
    path = tmp_path / "run.cfg"
    config = ExperimentConfig(construction=Construction.ALTERNATING, paths=7, beta_mass=0.5)
    dump_config(config.to_mapping(), str(path))
    loaded = ExperimentConfig.from_mapping(load_config_file(str(path)))
    assert loaded == config


def test_missing_config_file(tmp_path):
    """Test reading a file that does not exist."""
    with pytest.raises(ConfigError):
        load_config_file(str(tmp_path / "missing.cfg"))


def test_merged_converts_strings():
    """Test typed conversion of override values."""
    config = ExperimentConfig().merged(
        {"initial": "pseudo_stationary", "seed": "3", "gamma": "2.5", "out": None}
    )
    assert config.initial is InitialLaw.PSEUDO_STATIONARY
    assert config.seed == 3
    assert config.gamma == 2.5
    assert config.out is None


@pytest.mark.parametrize(
    "overrides",
    [
        {"colour": "red"},
        {"paths": "many"},
        {"construction": "braiding"},
        {"scale_unit": "0"},
        {"a": "-1"},
        {"paths": "0"},
        {"construction": "interweaving", "beta_mass": "0.5"},
    ],
)
def test_merged_rejects_invalid(overrides):
    """Test that unknown keys and invalid values raise ConfigError."""
    with pytest.raises(ConfigError):
        ExperimentConfig().merged(overrides)


def test_worker_count(monkeypatch):
    """Test the worker count environment variable."""
    monkeypatch.setenv("SKEWER_LAB_WORKERS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("SKEWER_LAB_WORKERS", "0")
    with pytest.raises(ConfigError):
        worker_count()
    monkeypatch.setenv("SKEWER_LAB_WORKERS", "four")
    with pytest.raises(ConfigError):
        worker_count()
    monkeypatch.delenv("SKEWER_LAB_WORKERS")
    assert worker_count() >= 1
