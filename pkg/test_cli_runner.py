"""
Runner Test Suite
Command line, output directories, snapshot files and presets
"""

import json
import math
import re

import numpy as np
import pytest

from src.model import (
    ComplexField1D,
    ConfigValidationError,
    GaussianPulse,
    GridMismatchError,
    NumericalFailureError,
    PhysicalParams,
    SimulationConfig,
    SlabCondensate,
    ConstantControl,
    build_grid,
    dump_config,
)
from src.runner import cli
from src.runner.manifest import read_manifest
from src.runner.presets import list_presets, preset_path
from src.runner.snapshot_io import SnapshotFormatError, read_csv, read_snapshot, write_snapshot
from src.runner.tasks import TierDispatcher


def _write_config(tmp_path, config, name="run.ini"):
    path = tmp_path / name
    path.write_text(dump_config(config), encoding="utf-8")
    return str(path)


def _slab_config():
    return SimulationConfig(
        grid=build_grid(128, 128.0),
        params=PhysicalParams(mass=math.inf, g=1.0, gamma=1.0, alpha_mag=1.0),
        control=ConstantControl(1.0),
        pulse=GaussianPulse(center=-30.0, width=4.0),
        condensate=SlabCondensate(center=0.0, length=10.0, edge=1.0),
        dt=0.05,
        t_final=5.0,
        snapshot_stride=100,
        solver_tier="full",
        detection_plane=20.0,
    )


# ===== RUN =====


def test_run_writes_snapshots_index_and_manifest(tmp_path, transport_config):
    config_path = _write_config(tmp_path, transport_config)
    out = tmp_path / "out"
    assert cli.main(["run", "--config", config_path, "--tier", "analytic", "--out", str(out)]) == cli.EXIT_OK

    manifest = read_manifest(out)
    assert manifest["tier"] == "analytic"
    assert manifest["artifact"] == "eitbec"
    assert manifest["grid"] == {"n_points": 256, "length": 256.0}
    names = {entry["name"] for entry in manifest["files"]}
    assert {"index.csv", "diagnostics.csv"} <= names

    index = read_csv(out / "index.csv")
    assert len(index) == len(transport_config.snapshot_steps())
    assert {row["field"] for row in index} == {"envelope"}
    first = out / index[0]["file"]
    assert first.stat().st_size == 64 + 8 * 256

    diagnostics = read_csv(out / "diagnostics.csv")
    assert float(diagnostics[-1]["center"]) == pytest.approx(-20.0, abs=1e-6)


def test_manifest_config_echo_parses_back(tmp_path, transport_config):
    out = cli.cmd_run(_write_config(tmp_path, transport_config), "analytic", str(tmp_path / "out"))
    echo = read_manifest(out)["config_text"]
    assert re.search(r"^tier = analytic$", echo, flags=re.M)
    assert "[control]" in echo


def test_runs_are_byte_for_byte_reproducible(tmp_path, transport_config):
    config_path = _write_config(tmp_path, transport_config)
    first = cli.cmd_run(config_path, None, str(tmp_path / "a"))
    second = cli.cmd_run(config_path, None, str(tmp_path / "b"))
    for row in read_csv(first / "index.csv"):
        assert (first / row["file"]).read_bytes() == (second / row["file"]).read_bytes()


def test_run_without_out_goes_to_output_dir(tmp_path, transport_config):
    out = cli.cmd_run(_write_config(tmp_path, transport_config), "analytic")
    assert out.parent == tmp_path / "runs"
    assert out.name.startswith("run-analytic-")


def test_invalid_step_exits_with_two(tmp_path, transport_config):
    text = re.sub(r"^dt = .*$", "dt = 5.0", dump_config(transport_config), flags=re.M)
    path = tmp_path / "bad.ini"
    path.write_text(text, encoding="utf-8")
    assert cli.main(["run", "--config", str(path)]) == cli.EXIT_INVALID


def test_missing_config_exits_with_two(tmp_path):
    assert cli.main(["run", "--config", str(tmp_path / "missing.ini")]) == cli.EXIT_INVALID


def test_numerical_failure_exits_with_three(tmp_path, transport_config, monkeypatch):
    def fail(self, config, tier=None):
        raise NumericalFailureError("non-finite values in envelope at step 7", step=7, tag="envelope")

    monkeypatch.setattr(TierDispatcher, "dispatch", fail)
    assert cli.main(["run", "--config", _write_config(tmp_path, transport_config)]) == cli.EXIT_NUMERICAL


# ===== COMPARE =====


def test_compare_run_with_itself(tmp_path, transport_config):
    out = cli.cmd_run(_write_config(tmp_path, transport_config), "analytic", str(tmp_path / "out"))
    report = cli.cmd_compare(str(out), str(out), "relative_L2", str(tmp_path / "cmp"))
    assert report["max"] == 0.0
    assert len(report["rows"]) == len(transport_config.snapshot_steps())
    assert (tmp_path / "cmp" / "compare.csv").is_file()


def test_compare_reduced_and_analytic_runs(tmp_path, transport_config):
    config_path = _write_config(tmp_path, transport_config)
    reduced = cli.cmd_run(config_path, "reduced", str(tmp_path / "reduced"))
    analytic = cli.cmd_run(config_path, "analytic", str(tmp_path / "analytic"))
    report = cli.cmd_compare(str(reduced), str(analytic), "relative_L2")
    # complex64 storage
    assert report["max"] < 1e-5


def test_compare_refuses_different_grids(tmp_path, transport_config):
    run_a = cli.cmd_run(_write_config(tmp_path, transport_config), "analytic", str(tmp_path / "a"))
    other = transport_config.with_updates(grid=build_grid(512, 256.0))
    run_b = cli.cmd_run(_write_config(tmp_path, other, "other.ini"), "analytic", str(tmp_path / "b"))
    with pytest.raises(GridMismatchError):
        cli.cmd_compare(str(run_a), str(run_b))
    assert cli.main(["compare", str(run_a), str(run_b)]) == cli.EXIT_INVALID


# ===== SCAN =====


def test_scan_over_control_strength(tmp_path, transport_config):
    config_path = _write_config(tmp_path, transport_config.with_updates(t_final=20.0, snapshot_stride=25))
    path = cli.cmd_scan(config_path, "G0", [0.5, 1.0, 2.0], str(tmp_path / "scan"))
    rows = read_csv(path)
    assert [float(r["value"]) for r in rows] == [0.5, 1.0, 2.0]
    for row in rows:
        assert float(row["velocity"]) == pytest.approx(float(row["predicted"]), rel=1e-6)


def test_scan_over_probe_detuning(tmp_path):
    config_path = _write_config(tmp_path, _slab_config())
    out = tmp_path / "scan"
    argv = ["scan", "--config", config_path, "--param", "delta", "--linspace", "-1", "1", "3", "--out", str(out)]
    assert cli.main(argv) == cli.EXIT_OK
    rows = read_csv(out / "scan.csv")
    assert [float(r["value"]) for r in rows] == [-1.0, 0.0, 1.0]
    assert all(0.0 <= float(r["transmission"]) <= 1.0 for r in rows)
    assert "fwhm" in read_manifest(out)["extra"]


def test_scan_input_errors(tmp_path, transport_config):
    config_path = _write_config(tmp_path, transport_config)
    with pytest.raises(ConfigValidationError):
        cli.cmd_scan(config_path, "delta", [])
    assert cli.main(["scan", "--config", config_path, "--param", "mass", "--values", "1"]) == cli.EXIT_INVALID
    assert cli.main(["scan", "--config", config_path, "--param", "G0", "--values", "1,x"]) == cli.EXIT_INVALID


def test_parse_values():
    assert cli._parse_values("0.5, 1,2", None) == [0.5, 1.0, 2.0]
    assert cli._parse_values(None, ["0", "1", "5"]) == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert cli._parse_values(None, None) == []


# ===== PRESETS =====


def test_presets_listed_and_exported(tmp_path, capsys):
    assert cli.main(["presets", "--out", str(tmp_path / "presets")]) == cli.EXIT_OK
    printed = capsys.readouterr().out.split()
    assert printed == list_presets()
    assert {"transport", "stop_and_release", "harmonic_steering", "free_expansion",
            "transparency_scan"} <= set(printed)
    assert sorted(p.stem for p in (tmp_path / "presets").glob("*.ini")) == list_presets()


def test_unknown_preset():
    with pytest.raises(ConfigValidationError):
        preset_path("no_such_preset")


@pytest.mark.slow
def test_stop_and_release_run_reports_stored_phase(tmp_path):
    out = tmp_path / "sr"
    assert cli.main(["run", "--config", str(preset_path("stop_and_release")), "--out", str(out)]) == cli.EXIT_OK
    report = json.loads((out / "stored_phase.json").read_text(encoding="utf-8"))
    assert report["t_off"] == 25.0 and report["t_on"] == 65.0
    # Lambda = 0.05 times the lost weight: half of t_on - t_off plus the ramp edges
    assert report["stored_phase"] == pytest.approx(-1.05, rel=0.05)
    index = read_csv(out / "index.csv")
    assert {row["field"] for row in index} == {"envelope", "psi2_0", "psi0_1", "psi1_1"}


# ===== SNAPSHOT FILES =====


def test_snapshot_file_round_trip(tmp_path, grid):
    field = GaussianPulse(center=1.0, width=3.0, detuning=0.3).evaluate(grid)
    path = write_snapshot(tmp_path / "s.bin", field, 12.5, "envelope")
    record = read_snapshot(path)
    assert record.tag == "envelope"
    assert record.time == 12.5
    np.testing.assert_allclose(record.to_field(grid).values, field.values, atol=1e-7)


def test_snapshot_format_errors(tmp_path, grid):
    field = ComplexField1D.zeros(grid)
    with pytest.raises(SnapshotFormatError):
        write_snapshot(tmp_path / "x.bin", field, 0.0, "two words")
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"NOTASNAP" + b" " * 100)
    with pytest.raises(SnapshotFormatError):
        read_snapshot(bad)
    good = write_snapshot(tmp_path / "good.bin", field, 0.0, "envelope")
    truncated = tmp_path / "short.bin"
    truncated.write_bytes(good.read_bytes()[:-8])
    with pytest.raises(SnapshotFormatError):
        read_snapshot(truncated)
