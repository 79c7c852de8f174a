"""
src/model/fields.py - Complex Fields on a Grid
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.model import spectral
from src.model.errors import GridMismatchError, NumericalFailureError
from src.model.grid import Grid1D

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ComplexField1D:
    """
    Complex samples bound to a grid. The sample array is copied on
    construction and made read-only, so a field never changes after it is built.
    """

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.complex128, copy=True).reshape(-1)
        if values.shape[0] != self.grid.n_points:
            raise GridMismatchError(
                f"field has {values.shape[0]} samples, grid has {self.grid.n_points}"
            )
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: Grid1D) -> "ComplexField1D":
        return cls(grid, np.zeros(grid.n_points, dtype=np.complex128))

    @classmethod
    def uniform(cls, grid: Grid1D, value: complex) -> "ComplexField1D":
        return cls(grid, np.full(grid.n_points, value, dtype=np.complex128))

    def with_values(self, values: np.ndarray) -> "ComplexField1D":
        return ComplexField1D(self.grid, values)

    def norm_squared(self) -> float:
        """Periodic trapezoid rule: dx * sum |f|^2"""
        return float(self.grid.spacing * np.sum(np.abs(self.values) ** 2))

    def norm(self) -> float:
        return float(np.sqrt(self.norm_squared()))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def shifted(self, distance: float) -> "ComplexField1D":
        """f(x - distance), band-limited"""
        return self.with_values(spectral.shift(self.values, self.grid.wavenumbers, distance))

    def with_carrier(self, wavenumber: float) -> "ComplexField1D":
        """Multiply by exp(i k x); turns the envelope into the field that drives the atoms"""
        if wavenumber == 0.0:
            return self
        return self.with_values(self.values * np.exp(1j * wavenumber * self.grid.coordinates))

    def require_same_grid(self, other: "ComplexField1D") -> None:
        if self.grid != other.grid:
            raise GridMismatchError(f"grids differ: {self.grid} vs {other.grid}")

    def check_finite(self, tag: str, step: Optional[int] = None) -> "ComplexField1D":
        if not np.all(np.isfinite(self.values)):
            logger.error(f"[NUMERICS] Non-finite values in {tag} at step {step}")
            raise NumericalFailureError(f"non-finite values in {tag} at step {step}", step=step, tag=tag)
        return self
