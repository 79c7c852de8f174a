"""Model Package - Grid, Parameters, Schedules, Potentials and Run Configuration"""
from .errors import (
    ConfigValidationError,
    DomainError,
    EitBecError,
    FitQualityError,
    GridMismatchError,
    GridTooSmallError,
    NumericalFailureError,
    StabilityBoundError,
    StoppedLightError,
    UnsupportedOperationError,
)
from .grid import Grid1D, build_grid
from .fields import ComplexField1D
from .params import PhysicalParams, amplitude_factor, chemical_phase_rate, coupling_ratio
from .control import (
    ConstantControl,
    ControlSchedule,
    IntegralWeightCache,
    PiecewiseLinear,
    StopAndRelease,
    TanhRamp,
    coupling_factor,
    evaluate_control,
    integral_weight,
)
from .potentials import (
    ConstantPotential,
    HarmonicPotential,
    PotentialLandscape,
    PotentialSpec,
    SquareWellPotential,
    TabulatedPotential,
    ZeroPotential,
)
from .profiles import GaussianPulse, SlabCondensate, TabulatedPulse, UniformCondensate
from .snapshots import Snapshot, SnapshotSeries
from .simulation_config import SimulationConfig, SolverTier
from .config_loader import dump_config, load_config, parse_config_text

__all__ = [
    "ConfigValidationError", "DomainError", "EitBecError", "FitQualityError", "GridMismatchError",
    "GridTooSmallError", "NumericalFailureError", "StabilityBoundError", "StoppedLightError",
    "UnsupportedOperationError",
    "Grid1D", "build_grid", "ComplexField1D",
    "PhysicalParams", "amplitude_factor", "chemical_phase_rate", "coupling_ratio",
    "ConstantControl", "ControlSchedule", "IntegralWeightCache", "PiecewiseLinear", "StopAndRelease",
    "TanhRamp", "coupling_factor", "evaluate_control", "integral_weight",
    "ConstantPotential", "HarmonicPotential", "PotentialLandscape", "PotentialSpec",
    "SquareWellPotential", "TabulatedPotential", "ZeroPotential",
    "GaussianPulse", "SlabCondensate", "TabulatedPulse", "UniformCondensate",
    "Snapshot", "SnapshotSeries", "SimulationConfig", "SolverTier",
    "dump_config", "load_config", "parse_config_text",
]
