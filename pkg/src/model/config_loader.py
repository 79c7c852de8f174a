"""
src/model/config_loader.py - Run Configuration Files
INI files ([grid] [params] [control] [potential0-2] [condensate] [pulse] [run])
read with configparser. Every key is traced back to its line so that a
validation error points at the offending line.
"""

import configparser
import logging
import math
import re
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np

from src.model.control import ConstantControl, PiecewiseLinear, StopAndRelease, TanhRamp
from src.model.errors import ConfigValidationError
from src.model.grid import Grid1D
from src.model.params import PhysicalParams
from src.model.potentials import (
    ConstantPotential,
    HarmonicPotential,
    PotentialSpec,
    SquareWellPotential,
    TabulatedPotential,
)
from src.model.profiles import GaussianPulse, SlabCondensate, TabulatedPulse, UniformCondensate
from src.model.simulation_config import SimulationConfig

logger = logging.getLogger(__name__)

SECTIONS = ("grid", "params", "control", "potential0", "potential1", "potential2",
            "condensate", "pulse", "run")

# config key -> PhysicalParams field
PARAM_KEYS = {
    "M": "mass", "hbar": "hbar", "g": "g", "gamma": "gamma", "Delta": "Delta", "c": "c",
    "kG": "k_G", "kF": "k_F", "alpha": "alpha_mag", "mu": "mu",
    "u0": "u0", "u1": "u1", "u2": "u2",
    "u01": "u01", "u10": "u10", "u02": "u02", "u20": "u20", "u12": "u12", "u21": "u21",
}

CONTROL_KEYS = {
    "constant": ("G0",),
    "tanh_ramp": ("G_initial", "G_final", "t_center", "t_width"),
    "piecewise_linear": ("knots",),
    "stop_and_release": ("G0", "t_off", "t_on", "t_width"),
}

POTENTIAL_KEYS = {
    "zero": (),
    "constant": ("value",),
    "harmonic": ("omega", "center"),
    "square_well": ("depth", "half_width"),
    "tabulated": ("samples",),
}

RUN_KEYS = ("dt", "t_final", "stride", "tier", "n_substeps", "detection_plane")

_SECTION_RE = re.compile(r"^\s*\[([^\]]+)\]")
_KEY_RE = re.compile(r"^\s*([^=:#;\s\[][^=:]*?)\s*[=:]")


def _locate_keys(text: str) -> Dict[Tuple[str, Optional[str]], int]:
    """Map (section, key) and (section, None) to 1-based line numbers"""
    lines: Dict[Tuple[str, Optional[str]], int] = {}
    section = None
    for number, line in enumerate(text.splitlines(), start=1):
        match = _SECTION_RE.match(line)
        if match:
            section = match.group(1).strip()
            lines.setdefault((section, None), number)
            continue
        match = _KEY_RE.match(line)
        if match and section is not None:
            lines.setdefault((section, match.group(1).strip()), number)
    return lines


class _Reader:
    """Typed access to one parsed file, raising line-anchored errors"""

    def __init__(self, parser: configparser.ConfigParser, lines, source: Optional[str]):
        self.parser = parser
        self.lines = lines
        self.source = source

    def line_of(self, key: Optional[str]) -> Optional[int]:
        if not key:
            return None
        section, _, name = key.partition(".")
        return self.lines.get((section, name)) or self.lines.get((section, None))

    def error(self, message: str, key: str) -> ConfigValidationError:
        return ConfigValidationError(message, key=key, line=self.line_of(key), source=self.source)

    def anchor(self, exc: ConfigValidationError) -> ConfigValidationError:
        return exc.anchored(self.line_of(exc.key), self.source)

    def has(self, section: str, name: str) -> bool:
        return self.parser.has_option(section, name)

    def raw(self, section: str, name: str, default=None):
        if not self.parser.has_section(section) or not self.parser.has_option(section, name):
            if default is _REQUIRED:
                raise self.error("missing required key", f"{section}.{name}")
            return default
        return self.parser.get(section, name).strip()

    def number(self, section: str, name: str, default=None) -> Optional[float]:
        value = self.raw(section, name, default)
        if value is None or isinstance(value, float):
            return value
        try:
            return float(value)
        except ValueError:
            raise self.error(f"expected a number, got {value!r}", f"{section}.{name}")

    def integer(self, section: str, name: str, default=None) -> Optional[int]:
        value = self.raw(section, name, default)
        if value is None or isinstance(value, int):
            return value
        try:
            return int(value)
        except ValueError:
            raise self.error(f"expected an integer, got {value!r}", f"{section}.{name}")

    def array(self, section: str, name: str, dtype=float) -> np.ndarray:
        value = self.raw(section, name, _REQUIRED)
        try:
            return np.array([dtype(item.strip()) for item in value.split(",") if item.strip()])
        except ValueError:
            raise self.error("expected a comma-separated list of numbers", f"{section}.{name}")

    def check_keys(self, section: str, allowed) -> None:
        if not self.parser.has_section(section):
            return
        for name in self.parser.options(section):
            if name not in allowed:
                raise self.error(f"unknown key {name!r}", f"{section}.{name}")


_REQUIRED = object()


def _build_params(reader: _Reader) -> PhysicalParams:
    reader.check_keys("params", PARAM_KEYS)
    values = {}
    for key, attribute in PARAM_KEYS.items():
        value = reader.number("params", key)
        if value is not None:
            values[attribute] = value
    return PhysicalParams(**values)


def _build_control(reader: _Reader):
    kind = reader.raw("control", "kind", _REQUIRED)
    if kind not in CONTROL_KEYS:
        raise reader.error(f"unknown control kind {kind!r}; expected one of {list(CONTROL_KEYS)}", "control.kind")
    reader.check_keys("control", ("kind",) + CONTROL_KEYS[kind])
    if kind == "constant":
        return ConstantControl(reader.number("control", "G0", _REQUIRED))
    if kind == "tanh_ramp":
        return TanhRamp(
            reader.number("control", "G_initial", _REQUIRED),
            reader.number("control", "G_final", _REQUIRED),
            reader.number("control", "t_center", _REQUIRED),
            reader.number("control", "t_width", _REQUIRED),
        )
    if kind == "piecewise_linear":
        text = reader.raw("control", "knots", _REQUIRED)
        knots = []
        for item in text.split(","):
            t, sep, G = item.partition(":")
            if not sep:
                raise reader.error(f"knot {item.strip()!r} is not 't:G'", "control.knots")
            try:
                knots.append((float(t), float(G)))
            except ValueError:
                raise reader.error(f"knot {item.strip()!r} is not numeric", "control.knots")
        return PiecewiseLinear(tuple(knots))
    return StopAndRelease(
        reader.number("control", "G0", _REQUIRED),
        reader.number("control", "t_off", _REQUIRED),
        reader.number("control", "t_on", _REQUIRED),
        reader.number("control", "t_width", _REQUIRED),
    )


def _build_potential(reader: _Reader, level: int) -> PotentialSpec:
    section = f"potential{level}"
    default_frame = "comoving" if level == 1 else "lab"
    kind = reader.raw(section, "kind", "zero")
    if kind not in POTENTIAL_KEYS:
        raise reader.error(f"unknown potential kind {kind!r}; expected one of {list(POTENTIAL_KEYS)}",
                           f"{section}.kind")
    reader.check_keys(section, ("kind", "frame") + POTENTIAL_KEYS[kind])
    frame = reader.raw(section, "frame", "lab" if kind == "tabulated" else default_frame)
    common = {"level": level, "frame": frame}
    if kind == "zero":
        return PotentialSpec(**common)
    if kind == "constant":
        return ConstantPotential(value=reader.number(section, "value", _REQUIRED), **common)
    if kind == "harmonic":
        return HarmonicPotential(
            omega=reader.number(section, "omega", _REQUIRED),
            center=reader.number(section, "center", 0.0),
            **common,
        )
    if kind == "square_well":
        return SquareWellPotential(
            depth=reader.number(section, "depth", _REQUIRED),
            half_width=reader.number(section, "half_width", _REQUIRED),
            **common,
        )
    return TabulatedPotential(samples=reader.array(section, "samples"), **common)


def _build_condensate(reader: _Reader):
    kind = reader.raw("condensate", "kind", "uniform")
    if kind == "uniform":
        reader.check_keys("condensate", ("kind", "initial_coherence"))
        return UniformCondensate(reader.raw("condensate", "initial_coherence", "dark"))
    if kind == "slab":
        reader.check_keys("condensate", ("kind", "center", "length", "edge", "initial_coherence"))
        return SlabCondensate(
            center=reader.number("condensate", "center", 0.0),
            length=reader.number("condensate", "length", _REQUIRED),
            edge=reader.number("condensate", "edge", _REQUIRED),
            initial_coherence=reader.raw("condensate", "initial_coherence", "ground"),
        )
    raise reader.error(f"unknown condensate kind {kind!r}; expected uniform or slab", "condensate.kind")


def _build_pulse(reader: _Reader):
    kind = reader.raw("pulse", "kind", "gaussian")
    if kind == "gaussian":
        reader.check_keys("pulse", ("kind", "center", "width", "amplitude", "detuning"))
        return GaussianPulse(
            center=reader.number("pulse", "center", _REQUIRED),
            width=reader.number("pulse", "width", _REQUIRED),
            amplitude=reader.number("pulse", "amplitude", 1.0),
            detuning=reader.number("pulse", "detuning", 0.0),
        )
    if kind == "tabulated":
        reader.check_keys("pulse", ("kind", "samples"))
        return TabulatedPulse(reader.array("pulse", "samples", dtype=complex))
    raise reader.error(f"unknown pulse kind {kind!r}; expected gaussian or tabulated", "pulse.kind")


def parse_config_text(text: str, source: Optional[str] = None) -> SimulationConfig:
    """
    Build a validated SimulationConfig from INI text.

    Args:
        text: File contents
        source: Name used in error messages (usually the path)

    Returns:
        SimulationConfig

    Raises:
        ConfigValidationError: with `line` set to the offending line when known
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str  # keys are case-sensitive (M, Delta)
    try:
        parser.read_string(text, source=source or "<config>")
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        raise ConfigValidationError(f"unreadable config: {exc.message}", line=line, source=source)

    reader = _Reader(parser, _locate_keys(text), source)
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigValidationError(f"unknown section [{section}]", key=section,
                                        line=reader.lines.get((section, None)), source=source)

    try:
        reader.check_keys("grid", ("n", "length"))
        reader.check_keys("run", RUN_KEYS)
        grid = Grid1D(reader.integer("grid", "n", _REQUIRED), reader.number("grid", "length", _REQUIRED))
        params = _build_params(reader)
        control = _build_control(reader)
        potentials = tuple(_build_potential(reader, level) for level in (0, 1, 2))
        condensate = _build_condensate(reader)
        pulse = _build_pulse(reader)
        config = SimulationConfig(
            grid=grid,
            params=params,
            control=control,
            pulse=pulse,
            condensate=condensate,
            potentials=potentials,
            dt=reader.number("run", "dt", _REQUIRED),
            t_final=reader.number("run", "t_final", _REQUIRED),
            snapshot_stride=reader.integer("run", "stride", 1),
            solver_tier=reader.raw("run", "tier", "reduced"),
            n_substeps=reader.integer("run", "n_substeps", 64),
            detection_plane=reader.number("run", "detection_plane"),
        )
    except ConfigValidationError as exc:
        if exc.line is not None:
            raise
        anchored = reader.anchor(exc)
        logger.error(f"[CONFIG] {anchored}")
        raise anchored from exc

    logger.info(f"[CONFIG] Loaded {source or 'config'}: tier={config.solver_tier.value}, "
                f"N={grid.n_points}, L={grid.length}, steps={config.n_steps}")
    return config


def load_config(path: Union[str, Path]) -> SimulationConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigValidationError(f"cannot read config file: {exc}", source=str(path))
    return parse_config_text(text, source=str(path))


def _fmt(value) -> str:
    if isinstance(value, complex) or isinstance(value, np.complexfloating):
        return repr(complex(value))
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return repr(float(value))


def dump_config(config: SimulationConfig) -> str:
    """
    Fully resolved config text in the loader's format; parsing it back
    gives an equivalent configuration (same dump).
    """
    out = ["[grid]", f"n = {config.grid.n_points}", f"length = {_fmt(config.grid.length)}", ""]

    out.append("[params]")
    for key, attribute in PARAM_KEYS.items():
        if key in ("u10", "u20", "u21"):
            continue
        out.append(f"{key} = {_fmt(getattr(config.params, attribute))}")
    out.append("")

    control = config.control
    out += ["[control]", f"kind = {control.kind}"]
    if control.kind == "piecewise_linear":
        out.append("knots = " + ", ".join(f"{_fmt(t)}:{_fmt(G)}" for t, G in control.knots))
    else:
        for key in CONTROL_KEYS[control.kind]:
            out.append(f"{key} = {_fmt(getattr(control, key))}")
    out.append("")

    for spec in config.potentials:
        out += [f"[potential{spec.level}]", f"kind = {spec.kind}", f"frame = {spec.frame}"]
        for key in POTENTIAL_KEYS[spec.kind]:
            value = getattr(spec, key)
            if key == "samples":
                out.append("samples = " + ", ".join(_fmt(v) for v in value))
            else:
                out.append(f"{key} = {_fmt(value)}")
        out.append("")

    condensate = config.condensate
    out += ["[condensate]", f"kind = {condensate.kind}"]
    if condensate.kind == "slab":
        out += [f"center = {_fmt(condensate.center)}", f"length = {_fmt(condensate.length)}",
                f"edge = {_fmt(condensate.edge)}"]
    out += [f"initial_coherence = {condensate.initial_coherence}", ""]

    pulse = config.pulse
    out += ["[pulse]", f"kind = {pulse.kind}"]
    if pulse.kind == "gaussian":
        amplitude = complex(pulse.amplitude)
        out += [f"center = {_fmt(pulse.center)}", f"width = {_fmt(pulse.width)}",
                f"amplitude = {_fmt(amplitude.real)}", f"detuning = {_fmt(pulse.detuning)}"]
    else:
        out.append("samples = " + ", ".join(_fmt(v) for v in pulse.samples))
    out.append("")

    out += ["[run]", f"dt = {_fmt(config.dt)}", f"t_final = {_fmt(config.t_final)}",
            f"stride = {config.snapshot_stride}", f"tier = {config.solver_tier.value}",
            f"n_substeps = {config.n_substeps}"]
    if config.detection_plane is not None:
        out.append(f"detection_plane = {_fmt(config.detection_plane)}")
    out.append("")
    return "\n".join(out)
