import pytest
import yaml
from click.testing import CliRunner

from mandelrays import __version__
from mandelrays.artifactio import parse_check_record, read_pair_table
from mandelrays.cli import cli
from mandelrays.utils import parse_complex


def invoke(*args):
    return CliRunner().invoke(cli, list(args))


def test_version(temp_config_dir):
    result = invoke("--version")
    assert result.exit_code == 0
    assert __version__ in result.output


def test_knead_prints_kneading_sequence(temp_config_dir):
    result = invoke("knead", "9/56")
    assert result.exit_code == 0, result.output
    assert result.output.strip() == "110|1"


def test_knead_accepts_binary_form(temp_config_dir):
    result = invoke("knead", "0.001:010")
    assert result.output.strip() == "110|1"


def test_knead_limits(temp_config_dir):
    result = invoke("knead", "1/3", "--limits", "--machine")
    assert result.exit_code == 0, result.output
    assert result.output.strip() == "1/3 |1* |1 |10"


@pytest.mark.parametrize("machine", [(), ("--machine",)])
def test_knead_limits_of_preperiodic_angle(temp_config_dir, machine):
    result = invoke("knead", "1/2", "--limits", *machine)
    assert result.exit_code == 1
    assert "not periodic" in result.output
    assert "|" not in result.output


def test_bad_angle_is_usage_error(temp_config_dir):
    result = invoke("knead", "3/2")
    assert result.exit_code == 2
    assert "outside" in result.output


def test_address(temp_config_dir):
    result = invoke("address", "1/5")
    assert result.exit_code == 0
    assert result.output.strip() == "1-3-4"


def test_address_of_preperiodic_angle_fails(temp_config_dir):
    result = invoke("address", "1/2")
    assert result.exit_code == 1
    assert "Error:" in result.output
    assert "not periodic" in result.output


def test_pair(temp_config_dir):
    result = invoke("pair", "4/15")
    assert result.exit_code == 0
    assert result.output.strip() == "(1/5, 4/15) period 4 primitive"

    machine = invoke("pair", "2/3", "--machine")
    assert machine.output.strip() == "2 1/3 2/3 |1* 1-2 false"


def test_pairs_table_and_machine(temp_config_dir):
    result = invoke("pairs", "--period", "3")
    assert result.exit_code == 0
    assert "kneading" in result.output
    assert "3/7" in result.output

    machine = invoke("pairs", "--period", "3", "--machine")
    lines = machine.output.strip().splitlines()
    assert lines == [
        "3 1/7 2/7 |11* 1-3 false",
        "3 3/7 4/7 |10* 1-2-3 true",
        "3 5/7 6/7 |11* 1-3 false",
    ]


def test_pairs_output_file(temp_config_dir, tmp_path):
    target = tmp_path / "pairs.txt"
    result = invoke("pairs", "--period", "4", "--all-below", "-o", str(target))
    assert result.exit_code == 0, result.output
    assert "Wrote 11 pair records" in result.output
    assert len(read_pair_table(target)) == 11


def test_count(temp_config_dir):
    result = invoke("count", "--max", "7")
    assert result.output.strip() == "1 1 3 6 15 27 63"


def test_portrait(temp_config_dir):
    result = invoke("portrait", "1/7", "--machine")
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0] == "rotation 1/3 orbit_period 1 rays 3"
    assert lines[1] == "point 0 1/7,2/7,4/7 1/7,2/7,4/7"


def test_misiurewicz(temp_config_dir):
    result = invoke("misiurewicz", "9/56")
    assert result.exit_code == 0
    assert result.output.strip() == "9/56 11/56 15/56"


def test_misiurewicz_of_periodic_angle(temp_config_dir):
    result = invoke("misiurewicz", "1/7")
    assert result.exit_code == 1
    assert "periodic" in result.output


def test_config_limits_enumeration(temp_config_dir, tmp_path):
    config_file = tmp_path / "small.yaml"
    config_file.write_text(yaml.dump({"limits": {"max_enumeration": 5}}), encoding="utf-8")
    result = invoke("--config", str(config_file), "misiurewicz", "9/56")
    assert result.exit_code == 1
    assert "enumeration bound" in result.output


@pytest.mark.parametrize("command", ["pair", "portrait"])
def test_config_limits_lookup(temp_config_dir, tmp_path, command):
    config_file = tmp_path / "small.yaml"
    config_file.write_text(yaml.dump({"limits": {"max_enumeration": 5}}), encoding="utf-8")
    result = invoke("--config", str(config_file), command, "1/511")
    assert result.exit_code == 1
    assert "enumeration limit" in result.output


def test_missing_config_file(temp_config_dir, tmp_path):
    result = invoke("--config", str(tmp_path / "nope.yaml"), "misiurewicz", "9/56")
    assert result.exit_code == 1
    assert "Config file not found" in result.output


def test_trace_needs_exactly_one_plane(temp_config_dir):
    assert invoke("trace", "--angle", "1/3").exit_code == 2
    assert invoke("trace", "--parameter", "--dynamic", "0", "--angle", "1/3").exit_code == 2


def test_trace_dynamic(temp_config_dir):
    result = invoke("trace", "--dynamic", "i", "--angle", "1/6", "--machine")
    assert result.exit_code == 0, result.output
    plane, angle, status, landing, *_ = result.output.split()
    assert (plane, angle, status) == ("dynamic", "1/6", "landed")
    assert parse_complex(landing) == pytest.approx(1j, abs=1e-6)


def test_trace_respects_numeric_limit(temp_config_dir, tmp_path):
    config_file = tmp_path / "small.yaml"
    config_file.write_text(yaml.dump({"limits": {"max_numeric_period": 2}}), encoding="utf-8")
    result = invoke("--config", str(config_file), "trace", "--parameter", "--angle", "1/7")
    assert result.exit_code == 1
    assert "limited to 2" in result.output


def test_solve_center(temp_config_dir):
    result = invoke("solve", "center", "--period", "2")
    assert result.exit_code == 0, result.output
    assert parse_complex(result.output.strip()) == pytest.approx(-1, abs=1e-12)


def test_solve_boundary(temp_config_dir):
    result = invoke("solve", "boundary", "--center", "0", "--period", "1", "--angle", "1/2")
    assert result.exit_code == 0, result.output
    assert parse_complex(result.output.split()[0]) == pytest.approx(-0.75, abs=1e-10)


def test_solve_misiurewicz(temp_config_dir):
    result = invoke("solve", "misiurewicz", "--preperiod", "1", "--period", "2", "--seed", "0.1+0.9i")
    assert result.exit_code == 0, result.output
    fields = result.output.split()
    assert parse_complex(fields[0]) == pytest.approx(1j, abs=1e-10)
    assert fields[1:5] == ["preperiod", "1", "period", "2"]


def test_solve_misiurewicz_wrong_orbit(temp_config_dir):
    result = invoke("solve", "misiurewicz", "--preperiod", "1", "--period", "1", "--seed", "0.01+0.01i")
    assert result.exit_code == 1
    assert "preperiod below" in result.output


@pytest.mark.parametrize(
    "args",
    [
        ("boundary", "--center", "0", "--period", "3"),
        ("misiurewicz", "--preperiod", "3", "--period", "1", "--seed", "0"),
    ],
)
def test_solve_respects_numeric_limit(temp_config_dir, tmp_path, args):
    config_file = tmp_path / "small.yaml"
    config_file.write_text(yaml.dump({"limits": {"max_numeric_period": 2}}), encoding="utf-8")
    result = invoke("--config", str(config_file), "solve", *args)
    assert result.exit_code == 1
    assert "limited to 2" in result.output


def test_render_writes_ppm(temp_config_dir, tmp_path):
    target = tmp_path / "m.ppm"
    result = invoke("render", "--size", "8x6", "--max-iterations", "30", "-o", str(target))
    assert result.exit_code == 0, result.output
    assert target.read_bytes().startswith(b"P6\n8 6\n255\n")
    assert len(target.read_bytes()) == len(b"P6\n8 6\n255\n") + 8 * 6 * 3


def test_render_julia_with_ray(temp_config_dir, tmp_path):
    target = tmp_path / "j.ppm"
    result = invoke(
        "render", "--plane", "julia", "--c", "0", "--size", "16x16", "--ray", "1/3", "-o", str(target)
    )
    assert result.exit_code == 0, result.output
    assert target.exists()


def test_render_julia_needs_parameter(temp_config_dir, tmp_path):
    result = invoke("render", "--plane", "julia", "-o", str(tmp_path / "x.ppm"))
    assert result.exit_code == 2


def test_render_bad_size(temp_config_dir, tmp_path):
    result = invoke("render", "--size", "8by6", "-o", str(tmp_path / "x.ppm"))
    assert result.exit_code == 2


def test_render_pixel_limit(temp_config_dir, tmp_path):
    config_file = tmp_path / "small.yaml"
    config_file.write_text(yaml.dump({"limits": {"max_pixels": 10}}), encoding="utf-8")
    result = invoke("--config", str(config_file), "render", "--size", "8x6", "-o", str(tmp_path / "x.ppm"))
    assert result.exit_code == 1
    assert "exceeds the limit" in result.output


def test_config_init_and_show(temp_config_dir):
    result = invoke("config", "init")
    assert result.exit_code == 0, result.output
    written = temp_config_dir / "mandelrays" / "config.yaml"
    assert written.exists()

    again = invoke("config", "init")
    assert again.exit_code == 1
    assert "--force" in again.output
    assert invoke("config", "init", "--force").exit_code == 0

    shown = invoke("config", "show")
    assert shown.exit_code == 0
    assert str(written) in shown.output
    assert "capture_radius" in shown.output


def test_project_config_overrides(temp_config_dir, tmp_path):
    (tmp_path / ".mandelrays.yaml").write_text(
        yaml.dump({"solver": {"capture_radius": 0.125}}), encoding="utf-8"
    )
    result = invoke("config", "show")
    assert result.exit_code == 0
    assert "capture_radius: 0.125" in result.output


@pytest.mark.slow
def test_verify_small(temp_config_dir, tmp_path):
    target = tmp_path / "report.txt"
    result = invoke("verify", "--max-period", "2", "--misiurewicz-bound", "2", "-o", str(target))
    assert result.exit_code == 0, result.output
    lines = [line for line in target.read_text(encoding="utf-8").splitlines() if not line.startswith("#")]
    records = [parse_check_record(line) for line in lines]
    assert [r.kind.value for r in records][:5] == ["COUNT", "PAIR", "ROOT", "DYNAMIC_PAIR", "COUNT"]
    assert all(record.passed for record in records)
