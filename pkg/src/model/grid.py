"""
src/model/grid.py - Uniform Periodic Grid
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from src.model.errors import ConfigValidationError


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class Grid1D:
    """
    Uniform periodic 1D grid on [-length/2, length/2).

    Attributes:
        n_points: Number of samples, a power of two
        length: Domain length L (the period)
        periodic: Boundary condition; only periodic grids are supported
    """

    n_points: int
    length: float
    periodic: bool = True

    def __post_init__(self):
        if not isinstance(self.n_points, (int, np.integer)) or isinstance(self.n_points, bool):
            raise ConfigValidationError("must be an integer", key="grid.n")
        if self.n_points < 2 or self.n_points & (self.n_points - 1):
            raise ConfigValidationError(
                f"must be a power of two >= 2, got {self.n_points}", key="grid.n"
            )
        if not math.isfinite(self.length) or self.length <= 0:
            raise ConfigValidationError(f"must be positive, got {self.length}", key="grid.length")
        if not self.periodic:
            raise ConfigValidationError("only periodic grids are supported", key="grid.periodic")
        object.__setattr__(self, "n_points", int(self.n_points))
        object.__setattr__(self, "length", float(self.length))

    @property
    def spacing(self) -> float:
        return self.length / self.n_points

    @property
    def nyquist(self) -> float:
        """Largest resolved wavenumber pi/dx"""
        return math.pi / self.spacing

    @cached_property
    def coordinates(self) -> np.ndarray:
        return _frozen(-0.5 * self.length + self.spacing * np.arange(self.n_points))

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers in FFT order"""
        return _frozen(2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.spacing))

    def scaled(self, factor: float) -> "Grid1D":
        """Same sample count on a domain `factor` times as long"""
        return Grid1D(self.n_points, self.length * factor, self.periodic)

    def nearest_index(self, x: float) -> int:
        """Index of the grid point closest to x (periodic)"""
        offset = (x + 0.5 * self.length) / self.spacing
        return int(np.round(offset)) % self.n_points


def build_grid(n_points: int, length: float) -> Grid1D:
    """Validated periodic grid"""
    return Grid1D(n_points=n_points, length=length)
