"""
src/diagnostics/measurements.py - Pulse Measurements
Moments of |E|^2 on the grid, peak phase, and field comparisons
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Iterable, List, Sequence

import numpy as np

from src.model.errors import DomainError
from src.model.fields import ComplexField1D

logger = logging.getLogger(__name__)

COMPARE_MODES = ("absolute_L2", "relative_L2", "modulus_only")


@dataclass(frozen=True)
class PulseDiagnostics:
    """
    Attributes:
        center: First moment of |E|^2
        width: Standard deviation of |E|^2
        energy: Integral of |E|^2
        peak_phase: arg E at the intensity maximum (parabolic sub-grid refinement)
        time: Snapshot time
        kurtosis: Fourth standardised moment (3 for a Gaussian)
        defined: False when the energy is zero; center/width/phase are NaN then
    """

    center: float
    width: float
    energy: float
    peak_phase: float
    time: float = 0.0
    kurtosis: float = math.nan
    defined: bool = True


def measure(envelope: ComplexField1D, time: float = 0.0) -> PulseDiagnostics:
    """Moments by the periodic trapezoid rule; the pulse must sit inside the grid"""
    grid = envelope.grid
    x = grid.coordinates
    density = np.abs(envelope.values) ** 2
    mass = float(np.sum(density))
    energy = grid.spacing * mass
    if mass == 0.0:
        return PulseDiagnostics(math.nan, math.nan, 0.0, math.nan, time, math.nan, defined=False)

    center = float(np.sum(x * density) / mass)
    variance = float(np.sum((x - center) ** 2 * density) / mass)
    width = math.sqrt(variance)
    fourth = float(np.sum((x - center) ** 4 * density) / mass)
    kurtosis = fourth / variance ** 2 if variance > 0 else math.nan

    return PulseDiagnostics(center, width, energy, _peak_phase(envelope.values, density), time, kurtosis)


def _peak_phase(values: np.ndarray, density: np.ndarray) -> float:
    n = len(values)
    j = int(np.argmax(density))
    left, right = (j - 1) % n, (j + 1) % n
    d_l, d_0, d_r = density[left], density[j], density[right]
    curvature = d_l - 2.0 * d_0 + d_r
    offset = 0.0
    if curvature < 0.0:
        offset = float(np.clip(0.5 * (d_l - d_r) / curvature, -0.5, 0.5))
    phases = np.unwrap(np.angle([values[left], values[j], values[right]]))
    p_l, p_0, p_r = phases
    phase = p_0 + 0.5 * offset * (p_r - p_l) + 0.5 * offset ** 2 * (p_r - 2.0 * p_0 + p_l)
    return float(math.remainder(phase, 2.0 * math.pi))


def measure_series(envelopes: Iterable[ComplexField1D], times: Sequence[float]) -> List[PulseDiagnostics]:
    return [measure(envelope, float(t)) for envelope, t in zip(envelopes, times)]


def unwrap_phases(series: Sequence[PulseDiagnostics]) -> List[PulseDiagnostics]:
    """Peak phases continued across snapshots onto the nearest branch"""
    if not series:
        return []
    unwrapped = np.unwrap(np.array([d.peak_phase for d in series]))
    return [replace(d, peak_phase=float(p)) for d, p in zip(series, unwrapped)]


def compare_fields(a: ComplexField1D, b: ComplexField1D, mode: str = "relative_L2") -> float:
    """
    Distance between two fields on the same grid.

    absolute_L2:  ||a - b||
    relative_L2:  ||a - b|| / max(||a||, ||b||)
    modulus_only: || |a| - |b| || / max(||a||, ||b||)

    Two zero fields compare as 0 in every mode.
    """
    a.require_same_grid(b)
    if mode not in COMPARE_MODES:
        raise DomainError(f"unknown comparison mode {mode!r}; expected one of {COMPARE_MODES}")
    dx = a.grid.spacing
    if mode == "modulus_only":
        difference = np.abs(a.values) - np.abs(b.values)
    else:
        difference = a.values - b.values
    distance = math.sqrt(dx * float(np.sum(np.abs(difference) ** 2)))
    if mode == "absolute_L2":
        return distance
    scale = max(a.norm(), b.norm())
    if scale == 0.0:
        return 0.0
    return distance / scale
