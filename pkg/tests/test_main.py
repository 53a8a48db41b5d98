"""Tests for the __main__.py module entry point."""

import subprocess
import sys
from pathlib import Path
from unittest.mock import patch

from click.testing import CliRunner

ROOT = Path(__file__).parent.parent


def test_main_module_execution():
    """Test that python -m mandelrays works correctly."""
    result = subprocess.run(
        [sys.executable, "-m", "mandelrays", "--help"],
        capture_output=True,
        text=True,
        cwd=ROOT,
    )

    assert result.returncode == 0
    assert "Usage:" in result.stdout
    assert "Commands:" in result.stdout
    assert "knead" in result.stdout


def test_main_module_with_invalid_command():
    """Test that python -m mandelrays with invalid command returns proper error."""
    result = subprocess.run(
        [sys.executable, "-m", "mandelrays", "invalid_command"],
        capture_output=True,
        text=True,
        cwd=ROOT,
    )

    assert result.returncode != 0
    assert "No such command" in result.stderr


def test_main_module_runs_a_command():
    result = subprocess.run(
        [sys.executable, "-m", "mandelrays", "knead", "25/56"],
        capture_output=True,
        text=True,
        cwd=ROOT,
    )

    assert result.returncode == 0
    assert result.stdout.strip() == "100|101"


def test_main_module_structure():
    """Test that __main__.py has the correct structure."""
    main_file = ROOT / "mandelrays" / "__main__.py"

    assert main_file.exists()

    content = main_file.read_text(encoding="utf-8")
    assert "from .cli import main" in content
    assert 'if __name__ == "__main__":' in content
    assert "main()" in content


@patch("mandelrays.cli.cli")
def test_main_reports_interrupt(mock_cli, capsys):
    """Ctrl-C exits with status 1 and a short message."""
    from mandelrays.cli import main

    mock_cli.side_effect = KeyboardInterrupt
    try:
        main()
    except SystemExit as e:
        assert e.code == 1
    else:
        raise AssertionError("main() should exit")
    assert "cancelled" in capsys.readouterr().err


def test_verbose_flag_enables_debug_logging(temp_config_dir):
    from mandelrays.cli import cli

    result = CliRunner().invoke(cli, ["-v", "count", "--max", "3"])
    assert result.exit_code == 0
    assert result.output.strip().endswith("1 1 3")
