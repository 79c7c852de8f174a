"""
src/model/profiles.py - Pulse and Condensate Profiles
Initial probe envelope and the ground-state condensate layout
"""

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from src.model.errors import ConfigValidationError, GridMismatchError
from src.model.fields import ComplexField1D
from src.model.grid import Grid1D

COHERENCES = ("dark", "ground")


class PulseSpec:
    """Initial envelope of the probe at t = 0"""

    kind: ClassVar[str] = "abstract"

    def evaluate(self, grid: Grid1D, c: float = 1.0) -> ComplexField1D:
        raise NotImplementedError


@dataclass(frozen=True)
class GaussianPulse(PulseSpec):
    """
    amplitude * exp(-(x - center)^2 / 4 width^2) * exp(i detuning (x - center) / c)

    `width` is the standard deviation of |E|^2; `detuning` is the probe
    (two-photon) detuning carried as a spatial phase ramp.
    """

    center: float
    width: float
    amplitude: complex = 1.0
    detuning: float = 0.0

    kind: ClassVar[str] = "gaussian"

    def __post_init__(self):
        if not math.isfinite(self.center):
            raise ConfigValidationError("must be finite", key="pulse.center")
        if not math.isfinite(self.width) or self.width <= 0:
            raise ConfigValidationError(f"must be positive, got {self.width}", key="pulse.width")
        if not math.isfinite(self.detuning):
            raise ConfigValidationError("must be finite", key="pulse.detuning")
        if not np.isfinite(self.amplitude):
            raise ConfigValidationError("must be finite", key="pulse.amplitude")

    def evaluate(self, grid: Grid1D, c: float = 1.0) -> ComplexField1D:
        x = grid.coordinates - self.center
        values = self.amplitude * np.exp(-(x ** 2) / (4.0 * self.width ** 2))
        if self.detuning != 0.0:
            values = values * np.exp(1j * self.detuning * x / c)
        return ComplexField1D(grid, values)


@dataclass(frozen=True, eq=False)
class TabulatedPulse(PulseSpec):
    samples: np.ndarray

    kind: ClassVar[str] = "tabulated"

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.complex128, copy=True).reshape(-1)
        if not np.all(np.isfinite(samples)):
            raise ConfigValidationError("samples must be finite", key="pulse.samples")
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    def evaluate(self, grid: Grid1D, c: float = 1.0) -> ComplexField1D:
        if self.samples.shape[0] != grid.n_points:
            raise GridMismatchError(
                f"tabulated pulse has {self.samples.shape[0]} samples, grid has {grid.n_points}"
            )
        return ComplexField1D(grid, self.samples)


@dataclass(frozen=True)
class UniformCondensate:
    """alpha everywhere"""

    initial_coherence: str = "dark"

    kind: ClassVar[str] = "uniform"

    def __post_init__(self):
        if self.initial_coherence not in COHERENCES:
            raise ConfigValidationError(
                f"must be one of {COHERENCES}, got {self.initial_coherence!r}",
                key="condensate.initial_coherence",
            )

    def profile(self, grid: Grid1D) -> np.ndarray:
        return np.ones(grid.n_points)


@dataclass(frozen=True)
class SlabCondensate:
    """alpha on [center - length/2, center + length/2] with tanh edges of scale `edge`"""

    center: float
    length: float
    edge: float
    initial_coherence: str = "ground"

    kind: ClassVar[str] = "slab"

    def __post_init__(self):
        if not math.isfinite(self.center):
            raise ConfigValidationError("must be finite", key="condensate.center")
        if not math.isfinite(self.length) or self.length <= 0:
            raise ConfigValidationError(f"must be positive, got {self.length}", key="condensate.length")
        if not math.isfinite(self.edge) or self.edge <= 0:
            raise ConfigValidationError(f"must be positive, got {self.edge}", key="condensate.edge")
        if self.initial_coherence not in COHERENCES:
            raise ConfigValidationError(
                f"must be one of {COHERENCES}, got {self.initial_coherence!r}",
                key="condensate.initial_coherence",
            )

    def profile(self, grid: Grid1D) -> np.ndarray:
        x = grid.coordinates
        left = self.center - 0.5 * self.length
        right = self.center + 0.5 * self.length
        return 0.5 * (np.tanh((x - left) / self.edge) - np.tanh((x - right) / self.edge))


CondensateSpec = (UniformCondensate, SlabCondensate)
