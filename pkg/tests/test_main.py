"""Test module for main.py functionality."""

from unittest.mock import patch

import pytest

from skewer_lab.database.models import Construction, InitialLaw
from skewer_lab.main import (
    EXIT_ERROR,
    EXIT_OK,
    _parse_params,
    _simplex_point,
    build_config,
    main,
    parse_arguments,
)
from skewer_lab.utils.config import ConfigError


def test_main_help(capsys):
    """Test that the main help message is displayed correctly."""
    with pytest.raises(SystemExit) as exc_info:
        with patch("sys.argv", ["script_name", "-h"]):
            parse_arguments()

    assert exc_info.value.code == 0
    captured = capsys.readouterr()
    help_output = captured.out

    # Verify expected help content
    assert "Interval-partition evolutions" in help_output
    assert "--config" in help_output
    assert "--dry-run" in help_output
    assert "positional arguments:" in help_output

    # Verify all commands are present without enforcing order
    expected_commands = {"simulate", "verify", "export", "report"}
    for cmd in expected_commands:
        assert cmd in help_output


@pytest.mark.parametrize("command", ["simulate", "verify", "export", "report"])
def test_subcommand_help(command, capsys):
    """Test that each subcommand's help message is displayed correctly."""
    with pytest.raises(SystemExit) as exc_info:
        with patch("sys.argv", ["script_name", command, "-h"]):
            parse_arguments()

    assert exc_info.value.code == 0
    captured = capsys.readouterr()
    help_output = captured.out

    # Verify command-specific help content
    assert command in help_output
    assert "-h, --help" in help_output

    # Verify command-specific arguments
    if command == "simulate":
        assert "type2" in help_output
        assert "resampling" in help_output
    elif command == "verify":
        assert "--param" in help_output
        assert "--list" in help_output
    elif command == "export":
        assert "--spindles-out" in help_output
    elif command == "report":
        assert "--db" in help_output


def test_simulate_type2_help(capsys):
    """Test the options of the type-2 simulation."""
    with pytest.raises(SystemExit):
        parse_arguments(["simulate", "type2", "-h"])
    help_output = capsys.readouterr().out
    for option in ("--construction", "--initial", "--beta-mass", "--depoissonize", "--scale-unit"):
        assert option in help_output


def test_build_config_flags_override_file(tmp_path):
    """Test that flags take precedence over the config file."""
    config_path = tmp_path / "run.cfg"
    config_path.write_text("paths = 5\nconstruction = alternating\nseed = 2\n")
    argv = ["--config", str(config_path), "simulate", "type2", "--paths", "9"]
    args = parse_arguments(argv + ["--initial", "pseudo_stationary"])
    config = build_config(args)
    assert config.paths == 9
    assert config.seed == 2
    assert config.construction is Construction.ALTERNATING
    assert config.initial is InitialLaw.PSEUDO_STATIONARY
    assert config.command == "simulate"


def test_parse_params():
    """Test KEY=VALUE battery parameters."""
    assert _parse_params(["y=0.5", "max-blocks = 4"]) == {"y": "0.5", "max_blocks": "4"}
    assert _parse_params(None) == {}
    with pytest.raises(ConfigError):
        _parse_params(["y"])


def test_simplex_point():
    """Test parsing of starting points on the simplex."""
    assert _simplex_point("0.9,0.05,0.05") == [0.9, 0.05, 0.05]
    for bad in ("0.5,0.5", "0.5,0.6,-0.1", "a,b,c", "0.5,0.5,0.5"):
        with pytest.raises(ConfigError):
            _simplex_point(bad)


def test_main_list(capsys):
    """Test listing the battery."""
    assert main(["verify", "--list"]) == EXIT_OK
    names = capsys.readouterr().out.split()
    assert "d_metric_oracle" in names
    assert names == sorted(names)


def test_main_errors(tmp_path):
    """Test exit code 2 for usage, configuration and library errors."""
    assert main(["simulate"]) == EXIT_ERROR
    assert main(["--config", str(tmp_path / "missing.cfg"), "verify", "--list"]) == EXIT_ERROR
    assert main(["verify", "no_such_test", "--paths", "1"]) == EXIT_ERROR
    assert main(["simulate", "type2", "--scale-unit", "0"]) == EXIT_ERROR
    assert main(["report", "--db", str(tmp_path / "results.db")]) == EXIT_OK
