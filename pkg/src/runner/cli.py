"""
src/runner/cli.py - Command Line Interface

    python -m src.runner.cli run --config CONFIG [--tier full|reduced|analytic] [--out DIR]
    python -m src.runner.cli compare RUN_A RUN_B [--mode relative_L2] [--out DIR]
    python -m src.runner.cli scan --config CONFIG --param delta --values -1,0,1 [--out DIR]
    python -m src.runner.cli presets [--out DIR]

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

import argparse
import json
import logging
import math
import os
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

sys.path.append(os.path.join(os.path.dirname(__file__), "..", ".."))

from src.config.logging_setup import setup_logging
from src.config.settings import OUTPUT_DIR
from src.diagnostics.measurements import COMPARE_MODES, compare_fields, measure, unwrap_phases
from src.diagnostics.validation import (
    SCAN_PARAMETERS,
    fit_velocity,
    transparency_fwhm,
    transparency_scan,
)
from src.model.config_loader import dump_config, load_config
from src.model.control import ConstantControl, StopAndRelease
from src.model.errors import (
    ConfigValidationError,
    EitBecError,
    FitQualityError,
    GridMismatchError,
    GridTooSmallError,
    NumericalFailureError,
    StoppedLightError,
)
from src.model.grid import Grid1D
from src.model.simulation_config import SimulationConfig
from src.model.snapshots import SnapshotSeries
from src.runner.manifest import RunManifest, read_manifest
from src.runner.presets import export_presets, list_presets
from src.runner.snapshot_io import (
    DIAGNOSTIC_FIELDS,
    INDEX_FIELDS,
    read_csv,
    read_snapshot,
    write_csv,
    write_snapshot,
)
from src.runner.tasks import TierDispatcher
from src.solvers.analytic_solution import global_phase, group_velocity
from src.utils.uuid_generator import generate_run_id

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

NUMERICAL_ERRORS = (NumericalFailureError, StoppedLightError, GridTooSmallError, FitQualityError)


def _out_dir(out: Optional[str], prefix: str) -> Path:
    path = Path(out) if out else OUTPUT_DIR / f"{prefix}-{generate_run_id()}"
    path.mkdir(parents=True, exist_ok=True)
    return path


def _grid_info(grid: Grid1D) -> Dict[str, float]:
    return {"n_points": grid.n_points, "length": grid.length}


# ===== RUN =====


def stored_phase_report(config: SimulationConfig, series: SnapshotSeries) -> Dict[str, float]:
    """
    Peak phase of the final envelope against the global phase of the
    schedule, and the part of it accumulated because the pulse was stopped
    (difference to a run that keeps G = G0 throughout).
    """
    p = config.params
    schedule = config.control
    t_final = series.final.time
    phi = global_phase(schedule, t_final, p.mu, p.u12, p.alpha_mag, p.g)
    reference = global_phase(ConstantControl(schedule.G0), t_final, p.mu, p.u12, p.alpha_mag, p.g)
    diagnostics = unwrap_phases([measure(s.envelope, s.time) for s in series])
    measured = diagnostics[-1].peak_phase
    t_off, t_on = schedule.stored_interval
    return {
        "t_off": t_off,
        "t_on": t_on,
        "t_final": t_final,
        "global_phase": phi,
        "stored_phase": phi - reference,
        "measured_peak_phase": measured,
        "difference": math.remainder(measured - phi, 2.0 * math.pi),
    }


def write_run(config: SimulationConfig, series: SnapshotSeries, out_dir: Path, run_id: str,
              wall_clock: float) -> RunManifest:
    """Snapshots, index, diagnostics and manifest of one run"""
    manifest = RunManifest(
        run_id=run_id,
        command="run",
        tier=series.tier,
        config_text=dump_config(config),
        steps=series.steps,
        wall_clock_seconds=wall_clock,
        mu_consistent=config.mu_consistent,
        grid=_grid_info(config.grid),
    )

    index_rows, diagnostic_rows = [], []
    for i, snapshot in enumerate(series):
        for tag, field in snapshot.fields().items():
            path = write_snapshot(out_dir / "snapshots" / f"{i:05d}_{tag}.bin", field, snapshot.time, tag)
            manifest.add_file(out_dir, path)
            index_rows.append({
                "step": i, "time": repr(snapshot.time), "field": tag,
                "file": f"snapshots/{path.name}", "control": repr(snapshot.control),
            })
        d = measure(snapshot.envelope, snapshot.time)
        diagnostic_rows.append({
            "time": repr(d.time), "center": repr(d.center), "width": repr(d.width), "energy": repr(d.energy),
            "peak_phase": repr(d.peak_phase), "kurtosis": repr(d.kurtosis), "G": repr(snapshot.control),
        })

    manifest.add_file(out_dir, write_csv(out_dir / "index.csv", INDEX_FIELDS, index_rows))
    manifest.add_file(out_dir, write_csv(out_dir / "diagnostics.csv", DIAGNOSTIC_FIELDS, diagnostic_rows))

    if series.detection_flux is not None:
        manifest.extra["transmitted_fraction"] = series.transmitted_fraction()

    if isinstance(config.control, StopAndRelease):
        report = stored_phase_report(config, series)
        path = out_dir / "stored_phase.json"
        with open(path, "w", encoding="utf-8") as f:
            json.dump(report, f, indent=2, sort_keys=True)
        manifest.add_file(out_dir, path)
        manifest.extra["stored_phase"] = report
        logger.info(f"[CLI] Stored phase {report['stored_phase']:.6g}, measured peak phase "
                    f"{report['measured_peak_phase']:.6g}")

    manifest.write(out_dir)
    return manifest


def cmd_run(config_path: str, tier: Optional[str] = None, out: Optional[str] = None) -> Path:
    """Run one configuration and write its output directory"""
    dispatcher = TierDispatcher()
    config = dispatcher.resolve(load_config(config_path), tier)
    run_id = generate_run_id()
    out_dir = _out_dir(out, f"run-{config.solver_tier.value}")
    logger.info(f"[CLI] Run {run_id}: {config_path} on the {config.solver_tier.value} tier -> {out_dir}")

    started = time.time()
    series = dispatcher.dispatch(config)
    write_run(config, series, out_dir, run_id, time.time() - started)
    return out_dir


# ===== COMPARE =====


def _envelope_rows(run_dir: Path) -> List[Dict[str, str]]:
    return [row for row in read_csv(run_dir / "index.csv") if row["field"] == "envelope"]


def cmd_compare(run_a: str, run_b: str, mode: str = "relative_L2", out: Optional[str] = None) -> Dict:
    """
    Per-snapshot distance between the envelopes of two runs.

    Raises:
        GridMismatchError: different grids or snapshot times
    """
    dir_a, dir_b = Path(run_a), Path(run_b)
    grid_a, grid_b = read_manifest(dir_a)["grid"], read_manifest(dir_b)["grid"]
    if grid_a != grid_b:
        raise GridMismatchError(f"runs use different grids: {grid_a} vs {grid_b}")
    grid = Grid1D(int(grid_a["n_points"]), float(grid_a["length"]))

    rows_a, rows_b = _envelope_rows(dir_a), _envelope_rows(dir_b)
    if len(rows_a) != len(rows_b):
        raise GridMismatchError(f"runs have {len(rows_a)} and {len(rows_b)} snapshots")

    table = []
    for row_a, row_b in zip(rows_a, rows_b):
        t_a, t_b = float(row_a["time"]), float(row_b["time"])
        if abs(t_a - t_b) > 1e-9 * max(1.0, abs(t_a)):
            raise GridMismatchError(f"snapshot times differ: {t_a} vs {t_b}")
        a = read_snapshot(dir_a / row_a["file"]).to_field(grid)
        b = read_snapshot(dir_b / row_b["file"]).to_field(grid)
        table.append({"time": repr(t_a), "distance": repr(compare_fields(a, b, mode))})

    distances = np.array([float(r["distance"]) for r in table])
    report = {
        "mode": mode,
        "rows": table,
        "max": float(np.max(distances)) if len(distances) else 0.0,
        "mean": float(np.mean(distances)) if len(distances) else 0.0,
    }
    logger.info(f"[CLI] Compare {mode}: max={report['max']:.4g} mean={report['mean']:.4g}")
    if out:
        out_dir = _out_dir(out, "compare")
        write_csv(out_dir / "compare.csv", ("time", "distance"), table)
    return report


# ===== SCAN =====


def cmd_scan(config_path: str, parameter: str, values: Sequence[float], out: Optional[str] = None) -> Path:
    """
    Parameter sweep. Delta / delta: transmitted fraction on the full tier.
    G0: fitted group velocity at constant control on the configured tier.
    """
    values = [float(v) for v in values]
    if not values:
        raise ConfigValidationError("scan needs at least one value", key="scan.values")
    config = load_config(config_path)
    out_dir = _out_dir(out, f"scan-{parameter}")
    started = time.time()
    manifest = RunManifest(run_id=generate_run_id(), command="scan", tier=config.solver_tier.value,
                           config_text=dump_config(config), mu_consistent=config.mu_consistent,
                           grid=_grid_info(config.grid))
    manifest.extra["parameter"] = parameter
    manifest.extra["values"] = values

    if parameter in SCAN_PARAMETERS:
        table = transparency_scan(config, values, parameter)
        rows = [{"value": repr(v), "transmission": repr(tr)} for v, tr in table.rows]
        path = write_csv(out_dir / "scan.csv", ("value", "transmission"), rows)
        if len(values) >= 3:
            manifest.extra["fwhm"] = transparency_fwhm(table)
    elif parameter == "G0":
        dispatcher = TierDispatcher()
        p = config.params
        rows = []
        for G0 in values:
            series = dispatcher.dispatch(config.with_updates(control=ConstantControl(G0)))
            velocity = fit_velocity([measure(s.envelope, s.time) for s in series])
            rows.append({
                "value": repr(G0),
                "velocity": repr(velocity),
                "predicted": repr(group_velocity(G0, p.g, p.alpha_mag, p.c)),
            })
            logger.info(f"[SCAN] G0={G0:.4g} velocity={velocity:.6g}")
        path = write_csv(out_dir / "scan.csv", ("value", "velocity", "predicted"), rows)
    else:
        raise ConfigValidationError(
            f"unknown scan parameter {parameter!r}; expected one of {list(SCAN_PARAMETERS) + ['G0']}",
            key="scan.parameter",
        )

    manifest.add_file(out_dir, path)
    manifest.wall_clock_seconds = time.time() - started
    manifest.write(out_dir)
    return path


# ===== PRESETS =====


def cmd_presets(out: Optional[str] = None) -> List[str]:
    names = list_presets()
    if out:
        export_presets(out)
    return names


# ===== ENTRY POINT =====


def _parse_values(text: Optional[str], linspace: Optional[List[str]]) -> List[float]:
    if linspace:
        start, stop, num = float(linspace[0]), float(linspace[1]), int(linspace[2])
        return [float(v) for v in np.linspace(start, stop, num)]
    if not text:
        return []
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise ConfigValidationError(f"--values must be comma-separated numbers, got {text!r}", key="scan.values")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eitbec", description="Slow and stopped light in a condensate")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ...")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run one configuration")
    run.add_argument("--config", required=True, help="INI run configuration")
    run.add_argument("--tier", choices=["full", "reduced", "analytic"], default=None)
    run.add_argument("--out", default=None)

    compare = sub.add_parser("compare", help="Compare the envelopes of two runs")
    compare.add_argument("run_a")
    compare.add_argument("run_b")
    compare.add_argument("--mode", choices=list(COMPARE_MODES), default="relative_L2")
    compare.add_argument("--out", default=None)

    scan = sub.add_parser("scan", help="Sweep a detuning or the control strength")
    scan.add_argument("--config", required=True, help="INI run configuration")
    scan.add_argument("--param", required=True, help="Delta, delta or G0")
    scan.add_argument("--values", default=None, help="comma-separated values")
    scan.add_argument("--linspace", nargs=3, metavar=("START", "STOP", "NUM"), default=None)
    scan.add_argument("--out", default=None)

    presets = sub.add_parser("presets", help="List or export the shipped configurations")
    presets.add_argument("--out", default=None)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        if args.command == "run":
            out_dir = cmd_run(args.config, args.tier, args.out)
            print(out_dir)
        elif args.command == "compare":
            report = cmd_compare(args.run_a, args.run_b, args.mode, args.out)
            for row in report["rows"]:
                print(f"{float(row['time']):.6g}\t{float(row['distance']):.6e}")
            print(f"max\t{report['max']:.6e}")
        elif args.command == "scan":
            values = _parse_values(args.values, args.linspace)
            print(cmd_scan(args.config, args.param, values, args.out))
        elif args.command == "presets":
            for name in cmd_presets(args.out):
                print(name)
    except NUMERICAL_ERRORS as e:
        logger.error(f"[CLI] Numerical failure: {e}", exc_info=True)
        return EXIT_NUMERICAL
    except (EitBecError, OSError) as e:
        logger.error(f"[CLI] Invalid input: {e}", exc_info=True)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
