"""
src/solvers/analytic_solution.py - Closed-Form Pulse Evolution
For a uniform condensate the envelope is

    E(x, t) = A(G(t)) * exp(i phi(t)) * f(u, theta(t)),   u = -x/c + W(t)

where f evolves under H0 = (hbar^2/2M)(kt - (i/c) d/du)^2 + V1 for the
effective time theta = t - W(t), A = G/sqrt(G^2 + g^2|alpha|^2) and
phi = (mu + u12|alpha|^2)(W - t). The u-grid has spacing dx/c and period
L/c, so moving between frames is an index reversal plus a spectral shift.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from src.config.settings import EDGE_BAND_FRACTION, EDGE_TOLERANCE
from src.model import spectral
from src.model.control import ControlSchedule, IntegralWeightCache
from src.model.errors import GridTooSmallError, UnsupportedOperationError
from src.model.fields import ComplexField1D
from src.model.grid import Grid1D
from src.model.params import PhysicalParams, amplitude_factor, coupling_ratio
from src.model.potentials import PotentialSpec
from src.model.simulation_config import SimulationConfig
from src.model.snapshots import Snapshot, SnapshotSeries

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ComovingFrame:
    """u = -x/c + W(t), with W evaluated through a per-frame incremental cache"""

    schedule: ControlSchedule
    g: float
    alpha_mag: float
    c: float
    _cache: Optional[IntegralWeightCache] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self._cache is None:
            object.__setattr__(self, "_cache", IntegralWeightCache(self.schedule, self.g, self.alpha_mag))

    def weight(self, t: float) -> float:
        return self._cache(t)

    def theta(self, t: float) -> float:
        return t - self.weight(t)


@dataclass(frozen=True)
class EffectiveHamiltonian:
    """
    H0 on the u-grid. V1 is given on the co-moving length coordinate
    s = -c u; phase_rate is mu + u12|alpha|^2.
    """

    k_t: float
    mass: float
    hbar: float
    c: float
    V1: PotentialSpec
    phase_rate: float = 0.0

    def kinetic_symbol(self, nu: np.ndarray) -> np.ndarray:
        """(hbar^2/2M)(kt + nu/c)^2 for plane waves exp(i nu u)"""
        if math.isinf(self.mass):
            return np.zeros_like(nu)
        return self.hbar ** 2 / (2.0 * self.mass) * (self.k_t + nu / self.c) ** 2

    def potential_on(self, grid_u: Grid1D) -> np.ndarray:
        return self.V1.evaluate(-self.c * grid_u.coordinates, self.mass)


def group_velocity(G: float, g: float, alpha_mag: float, c: float) -> float:
    """v_g = c G^2 / (g^2|alpha|^2 + G^2); c without a medium"""
    beta = (g * alpha_mag) ** 2
    if beta == 0.0:
        return c
    return c * G * G / (beta + G * G)


def theta(schedule: ControlSchedule, t: float, g: float, alpha_mag: float) -> float:
    """Effective evolution time t - W(t)"""
    return t - schedule.integral_weight(t, g, alpha_mag)


def u_of_xt(frame: ComovingFrame, x, t: float):
    return -np.asarray(x) / frame.c + frame.weight(t)


def global_phase(schedule: ControlSchedule, t: float, mu: float, u12: float, alpha_mag: float,
                 g: float) -> float:
    """phi(t) = (mu + u12|alpha|^2) * (W(t) - t)"""
    return (mu + u12 * alpha_mag ** 2) * (schedule.integral_weight(t, g, alpha_mag) - t)


def effective_hamiltonian(config: SimulationConfig) -> EffectiveHamiltonian:
    if not config.uniform_medium:
        raise UnsupportedOperationError("the analytic tier needs a uniform condensate")
    V1 = config.potential(1)
    if V1.frame != "comoving" and V1.uniform_value is None:
        raise UnsupportedOperationError(
            "the analytic tier needs V1 static in the pulse frame (potential1.frame = comoving)"
        )
    p = config.params
    return EffectiveHamiltonian(p.k_t, p.mass, p.hbar, p.c, V1, p.phase_rate)


# ===== FRAME MAPS =====


def comoving_grid(grid: Grid1D, c: float) -> Grid1D:
    """u-grid: same sample count, spacing dx/c"""
    return grid.scaled(1.0 / c)


def _reverse(values: np.ndarray) -> np.ndarray:
    # index j <-> (N - j) mod N, i.e. x <-> -x on the periodic grid
    return np.roll(values[::-1], 1)


def to_comoving(envelope: ComplexField1D, c: float) -> ComplexField1D:
    """f(u) = E(x = -c u) at t = 0"""
    return ComplexField1D(comoving_grid(envelope.grid, c), _reverse(envelope.values))


def from_comoving(profile: ComplexField1D, weight: float, grid: Grid1D) -> ComplexField1D:
    """E(x) = f(u = -x/c + W)"""
    k_u = profile.grid.wavenumbers
    advanced = spectral.shift(profile.values, k_u, -weight)
    return ComplexField1D(grid, _reverse(advanced))


# ===== PROPAGATION =====


def propagate_profile(profile: ComplexField1D, heff: EffectiveHamiltonian, theta_value: float,
                      n_substeps: int = 64) -> ComplexField1D:
    """
    exp(-i theta H0 / hbar) applied to a u-frame profile. A single exact
    multiplier when V1 is uniform, otherwise n_substeps Strang steps.
    """
    if theta_value == 0.0:
        return profile
    grid_u = profile.grid
    symbol = heff.kinetic_symbol(grid_u.wavenumbers) / heff.hbar
    uniform = heff.V1.uniform_value

    if uniform is not None:
        phase = np.exp(-1j * theta_value * (symbol + uniform / heff.hbar))
        return profile.with_values(spectral.apply_multiplier(profile.values, phase))

    n = max(int(n_substeps), 1)
    h = theta_value / n
    potential = heff.potential_on(grid_u) / heff.hbar
    half_potential = np.exp(-0.5j * h * potential)
    kinetic = np.exp(-1j * h * symbol)

    values = np.array(profile.values)
    for _ in range(n):
        values = half_potential * values
        values = spectral.apply_multiplier(values, kinetic)
        values = half_potential * values
    return profile.with_values(values)


def evolve_analytic(E0_of_u: ComplexField1D, frame: ComovingFrame, heff: EffectiveHamiltonian, t: float,
                    n_substeps: int = 64) -> ComplexField1D:
    """u-frame envelope at time t: A(G(t)) e^{i phi(t)} exp(-i theta H0/hbar) E0"""
    G = frame.schedule.evaluate(t)
    weight = frame.weight(t)
    phase = heff.phase_rate * (weight - t)
    evolved = propagate_profile(E0_of_u, heff, t - weight, n_substeps)
    factor = amplitude_factor(G, frame.g, frame.alpha_mag) * np.exp(1j * phase)
    return evolved.with_values(factor * evolved.values)


def _frame(config: SimulationConfig) -> ComovingFrame:
    p = config.params
    return ComovingFrame(config.control, p.g, p.alpha_mag, p.c)


def comoving_profile(config: SimulationConfig, t: float, frame: Optional[ComovingFrame] = None) -> ComplexField1D:
    """
    e^{i phi(t)} exp(-i theta H0/hbar) E0 on the u-grid, without the amplitude
    factor, so it stays meaningful while the light is stopped.
    """
    heff = effective_hamiltonian(config)
    frame = frame or _frame(config)
    weight = frame.weight(t)
    profile = to_comoving(config.pulse_field(), config.params.c)
    evolved = propagate_profile(profile, heff, t - weight, config.n_substeps)
    return evolved.with_values(np.exp(1j * heff.phase_rate * (weight - t)) * evolved.values)


def _check_edges(envelope: ComplexField1D, t: float) -> None:
    density = np.abs(envelope.values) ** 2
    total = float(np.sum(density))
    if total == 0.0:
        return
    band = max(1, int(round(EDGE_BAND_FRACTION * envelope.grid.n_points)))
    edge = float(np.sum(density[:band]) + np.sum(density[-band:]))
    if edge / total > EDGE_TOLERANCE:
        raise GridTooSmallError(
            f"{edge / total:.3g} of the pulse energy is in the outer grid band at t={t:.6g} "
            f"(tolerance {EDGE_TOLERANCE:g})"
        )


def analytic_field_snapshot(config: SimulationConfig, t: float,
                            frame: Optional[ComovingFrame] = None) -> ComplexField1D:
    """
    Closed-form envelope on the lab grid at time t.

    Raises:
        GridTooSmallError: the pulse reached the grid edge
        UnsupportedOperationError: non-uniform condensate, or V1 not static in the pulse frame
    """
    frame = frame or _frame(config)
    profile = comoving_profile(config, t, frame)
    A = amplitude_factor(config.control.evaluate(t), config.params.g, config.params.alpha_mag)
    envelope = from_comoving(profile.with_values(A * profile.values), frame.weight(t), config.grid)
    _check_edges(envelope, t)
    return envelope


def run_analytic_tier(config: SimulationConfig) -> SnapshotSeries:
    """Closed-form envelopes at the configured snapshot times"""
    started = time.time()
    frame = _frame(config)
    series = SnapshotSeries(tier="analytic", snapshots=[], input_energy=config.pulse_field().norm_squared(),
                            detection_plane=config.detection_plane)
    logger.info(f"[ANALYTIC] Evaluating {len(config.snapshot_steps())} snapshots")
    for t in config.snapshot_times():
        t = float(t)
        envelope = analytic_field_snapshot(config, t, frame)
        series.snapshots.append(Snapshot(t, envelope, config.control.evaluate(t)))
    logger.info(f"[ANALYTIC] Finished in {time.time() - started:.2f}s")
    return series


def effective_mass(params: PhysicalParams, G: float) -> float:
    """M (1 + G^2/g^2|alpha|^2): the mass seen by a pulse moving at fixed G"""
    kappa = coupling_ratio(G, params.g, params.alpha_mag)
    if kappa == 0.0:
        return math.inf
    return params.mass / kappa
