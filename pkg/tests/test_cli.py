"""Command-line surface: exit codes, report shape, reproducibility."""

import json
import os
from pathlib import Path

import numpy as np
import pytest

import liberlab.cli as cli
from liberlab.errors import NumericalError

FIXTURES = Path(__file__).parent / "fixtures"
UNIFORM = str(FIXTURES / "uniform.json")
BAD_ATOMS = str(FIXTURES / "bad_atoms.json")
FREE_HALF = str(FIXTURES / "free_half.json")


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_chi_report_on_stdout(capsys):
    code, out, _ = run(capsys, "chi", "--law", UNIFORM, "--grid", "4096")
    assert code == 0
    report = json.loads(out)
    assert report["chi"] == pytest.approx(-0.375 + np.log(2.0) / 2.0, abs=1e-9)
    assert report["generic"] is True
    assert report["config"]["law"] == UNIFORM
    assert report["config"]["grid"] == 4096
    assert "version" in report


def test_negative_infinity_serializes_as_string(capsys):
    code, out, _ = run(capsys, "chi", "--law", BAD_ATOMS)
    assert code == 0
    report = json.loads(out)
    assert report["chi"] == "-inf"
    assert report["generic"] is False


def test_fisher_and_lsi_agree_with_chi(capsys):
    code, fisher_out, _ = run(capsys, "fisher", "--law", UNIFORM)
    assert code == 0
    code, lsi_out, _ = run(capsys, "lsi", "--law", UNIFORM)
    assert code == 0
    fisher = json.loads(fisher_out)
    lsi = json.loads(lsi_out)
    assert lsi["phi_star"] == pytest.approx(fisher["phi_star"], rel=1e-12)
    assert lsi["margin"] == pytest.approx(
        lsi["chi"] + lsi["phi_star"], abs=1e-12
    )


def test_missing_law_is_a_usage_error(capsys):
    code, _, err = run(capsys, "chi")
    assert code == 1
    assert "error" in err.lower()


def test_unknown_command_is_a_usage_error(capsys):
    code, _, err = run(capsys, "entropy", "--law", UNIFORM)
    assert code == 1


def test_unreadable_law_file(capsys):
    code, _, err = run(capsys, "chi", "--law", "/nonexistent/law.json")
    assert code == 1
    assert "error" in err.lower()


def test_broken_law_content(tmp_path, capsys):
    bad = tmp_path / "law.json"
    bad.write_text('{"alpha": 0.5}')
    code, _, err = run(capsys, "chi", "--law", str(bad))
    assert code == 1


def test_numerical_failure_exits_two(capsys, monkeypatch):
    def boom(config):
        raise NumericalError("synthetic instability")

    monkeypatch.setitem(cli._COMMANDS, "chi", boom)
    code, _, err = run(capsys, "chi", "--law", UNIFORM)
    assert code == 2
    assert "numerical failure" in err


def test_sample_csv_shape(tmp_path, capsys):
    out = tmp_path / "spectra.csv"
    code, stdout, _ = run(
        capsys,
        "sample", "--N", "3", "--k", "2", "--l", "2",
        "--trials", "5", "--seed", "11", "--out", str(out),
    )
    assert code == 0
    assert f"wrote {out}" in stdout
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# liberlab ")
    assert lines[1] == "trial,eigenvalue_index,value"
    assert len(lines) == 2 + 5
    trial, index, value = lines[2].split(",")
    assert (trial, index) == ("0", "0")
    assert 0.0 <= float(value) <= 1.0


def test_liberate_csv_columns(tmp_path, capsys):
    out = tmp_path / "flow.csv"
    code, stdout, _ = run(
        capsys,
        "liberate", "--law", UNIFORM, "--particles", "16",
        "--tmax", "0.5", "--out", str(out),
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "t,chi,phi_star,half_integral"
    first = lines[2].split(",")
    assert float(first[0]) == 0.0
    last = lines[-1].split(",")
    assert float(last[0]) == pytest.approx(0.5, abs=1e-9)
    assert float(last[1]) >= float(first[1])


def test_reruns_are_byte_identical(tmp_path, capsys):
    out = tmp_path / "report.json"
    argv = ["lsi", "--law", FREE_HALF, "--grid", "512", "--seed", "7",
            "--out", str(out)]
    assert cli.main(argv) == 0
    first = out.read_bytes()
    assert cli.main(argv) == 0
    assert out.read_bytes() == first
    capsys.readouterr()

    csv_out = tmp_path / "spectra.csv"
    csv_argv = ["sample", "--N", "2", "--k", "1", "--l", "1",
                "--trials", "3", "--seed", "5", "--out", str(csv_out)]
    assert cli.main(csv_argv) == 0
    first = csv_out.read_bytes()
    assert cli.main(csv_argv) == 0
    assert csv_out.read_bytes() == first
    capsys.readouterr()


def test_no_partial_files_remain(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert cli.main(["chi", "--law", UNIFORM, "--out", str(out)]) == 0
    capsys.readouterr()
    assert [p.name for p in tmp_path.iterdir()] == ["report.json"]


def test_thread_cap_is_exported(monkeypatch, capsys):
    for var in cli._THREAD_VARS:
        monkeypatch.delenv(var, raising=False)
    monkeypatch.setenv("LIBERLAB_THREADS", "3")
    assert cli.main(["chi", "--law", UNIFORM]) == 0
    capsys.readouterr()
    for var in cli._THREAD_VARS:
        assert os.environ[var] == "3"


def test_equilibrium_command_reports_a_density(capsys):
    code, out, _ = run(
        capsys, "equilibrium", "--law", FREE_HALF, "--grid", "512"
    )
    assert code == 0
    report = json.loads(out)
    assert report["rho"] == pytest.approx(0.5, abs=1e-12)
    quantiles = np.asarray(report["density_quantiles"], dtype=float)
    assert quantiles.size == 101
    assert np.all(np.diff(quantiles) > 0.0)


def test_istar_command(capsys):
    code, out, _ = run(
        capsys, "istar", "--law", UNIFORM, "--particles", "48",
        "--tmax", "6.0",
    )
    assert code == 0
    report = json.loads(out)
    assert report["minus_chi"] == pytest.approx(0.375 - np.log(2.0) / 2.0, abs=1e-9)
    assert report["relative_gap"] < 0.3
