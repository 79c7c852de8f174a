"""
src/model/params.py - Physical Parameters
Nondimensional constants of the three-level condensate and the probe field
"""

import math
from dataclasses import dataclass, fields
from typing import Optional

from src.model.errors import ConfigValidationError

_PAIRS = (("u01", "u10"), ("u02", "u20"), ("u12", "u21"))


@dataclass(frozen=True)
class PhysicalParams:
    """
    Constants of the model.

    mass may be math.inf, which switches off every kinetic term.
    Interspecies collision constants are symmetric; give either member of a
    pair and the other is filled in.
    """

    mass: float = 1.0
    hbar: float = 1.0
    g: float = 1.0
    gamma: float = 0.0
    Delta: float = 0.0
    c: float = 1.0
    k_G: float = 0.0
    k_F: float = 0.0
    alpha_mag: float = 1.0
    mu: Optional[float] = None
    u0: float = 0.0
    u1: float = 0.0
    u2: float = 0.0
    u01: Optional[float] = None
    u10: Optional[float] = None
    u02: Optional[float] = None
    u20: Optional[float] = None
    u12: Optional[float] = None
    u21: Optional[float] = None

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigValidationError(f"must be a number, got {value!r}", key=f"params.{f.name}")
            if math.isnan(value):
                raise ConfigValidationError("must not be NaN", key=f"params.{f.name}")
            if math.isinf(value) and f.name != "mass":
                raise ConfigValidationError("must be finite", key=f"params.{f.name}")
            object.__setattr__(self, f.name, float(value))

        if self.mass <= 0:
            raise ConfigValidationError(f"must be positive, got {self.mass}", key="params.M")
        if self.hbar <= 0:
            raise ConfigValidationError(f"must be positive, got {self.hbar}", key="params.hbar")
        if self.c <= 0:
            raise ConfigValidationError(f"must be positive, got {self.c}", key="params.c")
        if self.g < 0:
            raise ConfigValidationError(f"must be non-negative, got {self.g}", key="params.g")
        if self.gamma < 0:
            raise ConfigValidationError(f"must be non-negative, got {self.gamma}", key="params.gamma")
        if self.alpha_mag < 0:
            raise ConfigValidationError(f"must be non-negative, got {self.alpha_mag}", key="params.alpha")

        for left, right in _PAIRS:
            a, b = getattr(self, left), getattr(self, right)
            if a is not None and b is not None and a != b:
                raise ConfigValidationError(
                    f"collision constants must be symmetric: {left}={a} but {right}={b}",
                    key=f"params.{right}",
                )
            value = a if a is not None else (b if b is not None else 0.0)
            object.__setattr__(self, left, value)
            object.__setattr__(self, right, value)

    @property
    def k_t(self) -> float:
        """Transferred momentum k_G - k_F"""
        return self.k_G - self.k_F

    @property
    def beta(self) -> float:
        """g^2 |alpha|^2"""
        return self.g ** 2 * self.alpha_mag ** 2

    @property
    def kinetic_coefficient(self) -> float:
        """hbar / 2M, zero for an infinite mass"""
        if math.isinf(self.mass):
            return 0.0
        return self.hbar / (2.0 * self.mass)

    @property
    def phase_rate(self) -> float:
        """mu + u12 |alpha|^2 (requires a resolved mu)"""
        return (self.mu or 0.0) + self.u12 * self.alpha_mag ** 2


def chemical_phase_rate(V2_const: float, u2: float, alpha_mag: float, hbar: float = 1.0) -> float:
    """
    Phase rate mu of a uniform condensate psi = alpha exp(i mu t) under a
    constant level-2 potential: mu = -(V2/hbar + 2 u2 |alpha|^2).
    """
    return -(V2_const / hbar + 2.0 * u2 * alpha_mag ** 2)


def amplitude_factor(G: float, g: float, alpha_mag: float) -> float:
    """Field share of the dark-state polariton, G / sqrt(G^2 + g^2|alpha|^2)"""
    denominator = math.sqrt(G * G + (g * alpha_mag) ** 2)
    if denominator == 0.0:
        return 1.0
    return G / denominator


def coupling_ratio(G: float, g: float, alpha_mag: float) -> float:
    """kappa = 1 / (1 + G^2 / g^2|alpha|^2); 1 when G = 0, 0 without a medium"""
    beta = (g * alpha_mag) ** 2
    if beta == 0.0:
        return 0.0
    return beta / (beta + G * G)
