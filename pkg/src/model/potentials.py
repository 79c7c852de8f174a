"""
src/model/potentials.py - External Potentials
Level potentials V_j(x) and their evaluation on a grid. The level-1
potential may live in the pulse frame s = x - c W(t).
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, ClassVar, Dict, Optional, Sequence

import numpy as np

from src.model.errors import ConfigValidationError, GridMismatchError
from src.model.grid import Grid1D

logger = logging.getLogger(__name__)

FRAMES = ("lab", "comoving")


@dataclass(frozen=True, kw_only=True)
class PotentialSpec:
    """Zero potential; the base of every variant"""

    level: int = 0
    frame: str = "lab"

    kind: ClassVar[str] = "zero"

    def __post_init__(self):
        if self.level not in (0, 1, 2):
            raise ConfigValidationError(f"level must be 0, 1 or 2, got {self.level}", key=self._key("level"))
        if self.frame not in FRAMES:
            raise ConfigValidationError(f"frame must be one of {FRAMES}, got {self.frame!r}",
                                        key=self._key("frame"))
        if self.frame == "comoving" and self.level != 1:
            raise ConfigValidationError("only the level-1 potential can be co-moving", key=self._key("frame"))

    def _key(self, name: str) -> str:
        return f"potential{self.level}.{name}"

    def evaluate(self, coords: np.ndarray, mass: float = 1.0) -> np.ndarray:
        return np.zeros_like(np.asarray(coords, dtype=float))

    @property
    def uniform_value(self) -> Optional[float]:
        """The constant value for spatially uniform variants, else None"""
        return 0.0


ZeroPotential = PotentialSpec


@dataclass(frozen=True, kw_only=True)
class ConstantPotential(PotentialSpec):
    value: float

    kind: ClassVar[str] = "constant"

    def __post_init__(self):
        super().__post_init__()
        if not math.isfinite(self.value):
            raise ConfigValidationError("must be finite", key=self._key("value"))

    def evaluate(self, coords: np.ndarray, mass: float = 1.0) -> np.ndarray:
        return np.full_like(np.asarray(coords, dtype=float), self.value)

    @property
    def uniform_value(self) -> Optional[float]:
        return self.value


@dataclass(frozen=True, kw_only=True)
class HarmonicPotential(PotentialSpec):
    """1/2 M omega^2 (x - center)^2"""

    omega: float
    center: float = 0.0

    kind: ClassVar[str] = "harmonic"

    def __post_init__(self):
        super().__post_init__()
        if not math.isfinite(self.omega) or self.omega < 0:
            raise ConfigValidationError(f"must be finite and >= 0, got {self.omega}", key=self._key("omega"))
        if not math.isfinite(self.center):
            raise ConfigValidationError("must be finite", key=self._key("center"))

    def evaluate(self, coords: np.ndarray, mass: float = 1.0) -> np.ndarray:
        if math.isinf(mass):
            raise ConfigValidationError("a harmonic potential needs a finite mass", key="params.M")
        x = np.asarray(coords, dtype=float)
        return 0.5 * mass * self.omega ** 2 * (x - self.center) ** 2

    @property
    def uniform_value(self) -> Optional[float]:
        return 0.0 if self.omega == 0.0 else None


@dataclass(frozen=True, kw_only=True)
class SquareWellPotential(PotentialSpec):
    """0 for |x| <= half_width, depth outside"""

    depth: float
    half_width: float

    kind: ClassVar[str] = "square_well"

    def __post_init__(self):
        super().__post_init__()
        if not math.isfinite(self.depth):
            raise ConfigValidationError("must be finite", key=self._key("depth"))
        if not math.isfinite(self.half_width) or self.half_width <= 0:
            raise ConfigValidationError(f"must be positive, got {self.half_width}", key=self._key("half_width"))

    def evaluate(self, coords: np.ndarray, mass: float = 1.0) -> np.ndarray:
        x = np.asarray(coords, dtype=float)
        return np.where(np.abs(x) <= self.half_width, 0.0, self.depth)

    @property
    def uniform_value(self) -> Optional[float]:
        return 0.0 if self.depth == 0.0 else None


@dataclass(frozen=True, kw_only=True, eq=False)
class TabulatedPotential(PotentialSpec):
    """Samples on the simulation grid (lab frame only)"""

    samples: np.ndarray

    kind: ClassVar[str] = "tabulated"

    def __post_init__(self):
        super().__post_init__()
        samples = np.array(self.samples, dtype=float, copy=True).reshape(-1)
        if not np.all(np.isfinite(samples)):
            raise ConfigValidationError("samples must be finite", key=self._key("samples"))
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)
        if self.frame != "lab":
            raise ConfigValidationError("tabulated potentials are lab-frame only", key=self._key("frame"))

    def evaluate(self, coords: np.ndarray, mass: float = 1.0) -> np.ndarray:
        coords = np.asarray(coords)
        if coords.shape[0] != self.samples.shape[0]:
            raise GridMismatchError(
                f"tabulated potential has {self.samples.shape[0]} samples, grid has {coords.shape[0]}"
            )
        return np.array(self.samples)

    @property
    def uniform_value(self) -> Optional[float]:
        if np.all(self.samples == self.samples[0]):
            return float(self.samples[0])
        return None


class PotentialLandscape:
    """
    Level potentials sampled on a grid. Lab-frame and uniform potentials are
    sampled once; a co-moving level-1 potential is evaluated at
    s = x - c W(t) using the run's weight evaluator.
    """

    def __init__(self, grid: Grid1D, potentials: Sequence[PotentialSpec], mass: float,
                 c: float = 1.0, weight: Optional[Callable[[float], float]] = None):
        by_level: Dict[int, PotentialSpec] = {p.level: p for p in potentials}
        self.grid = grid
        self.mass = mass
        self.c = c
        self.weight = weight
        self.specs = {level: by_level.get(level, PotentialSpec(level=level)) for level in (0, 1, 2)}
        self._static: Dict[int, np.ndarray] = {}
        for level, spec in self.specs.items():
            if not self.is_moving(level):
                values = spec.evaluate(grid.coordinates, mass)
                values.flags.writeable = False
                self._static[level] = values

    def is_moving(self, level: int) -> bool:
        spec = self.specs[level]
        return spec.frame == "comoving" and spec.uniform_value is None

    def values(self, level: int, t: float = 0.0) -> np.ndarray:
        if level in self._static:
            return self._static[level]
        if self.weight is None:
            raise ConfigValidationError("a co-moving potential needs the pulse-frame weight W(t)",
                                        key=f"potential{level}.frame")
        s = self.grid.coordinates - self.c * self.weight(t)
        return self.specs[level].evaluate(s, self.mass)

    def max_abs(self, level: int, times: Sequence[float] = (0.0,)) -> float:
        return float(max(np.max(np.abs(self.values(level, t))) for t in times))


def as_landscape(potentials, grid: Grid1D, mass: float, c: float = 1.0,
                 weight: Optional[Callable[[float], float]] = None) -> PotentialLandscape:
    """Accept a ready landscape, a single spec, or a sequence of specs"""
    if isinstance(potentials, PotentialLandscape):
        return potentials
    if potentials is None:
        potentials = ()
    elif isinstance(potentials, PotentialSpec):
        potentials = (potentials,)
    return PotentialLandscape(grid, potentials, mass, c, weight)
