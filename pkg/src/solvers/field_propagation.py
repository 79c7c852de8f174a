"""
src/solvers/field_propagation.py - Probe Field Propagation
Maxwell transport of the probe envelope (full tier) and the closed
single-field equation for a uniform condensate (reduced tier).
"""

import logging
import time
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from src.config.settings import STOP_THRESHOLD
from src.model import spectral
from src.model.control import ControlSchedule, IntegralWeightCache
from src.model.errors import StoppedLightError, UnsupportedOperationError
from src.model.fields import ComplexField1D
from src.model.params import PhysicalParams
from src.model.potentials import PotentialLandscape, PotentialSpec, as_landscape
from src.model.simulation_config import SimulationConfig
from src.model.snapshots import Snapshot, SnapshotSeries
from src.solvers.gpe_dynamics import initial_state, step_first_order

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FieldState:
    envelope: ComplexField1D
    time: float = 0.0


def dipole_source(psi2_0: ComplexField1D, psi0_1: ComplexField1D, k_F: float, g: float) -> ComplexField1D:
    """
    Polarisation source of the probe envelope, -i g exp(-i kF x) conj(psi2) psi0.
    With this sign a resonant medium absorbs.
    """
    psi2_0.require_same_grid(psi0_1)
    phase = np.exp(-1j * k_F * psi2_0.grid.coordinates) if k_F != 0.0 else 1.0
    return psi2_0.with_values(-1j * g * phase * np.conj(psi2_0.values) * psi0_1.values)


def advect_step(field: FieldState, source: ComplexField1D, dt: float, c: float) -> FieldState:
    """
    E_t + c E_x = S over dt: exact spectral translation of E by c dt plus
    the source translated by c dt / 2 (midpoint rule along the characteristic).
    """
    envelope = field.envelope
    envelope.require_same_grid(source)
    k = envelope.grid.wavenumbers
    spectrum = spectral.forward(envelope.values) * spectral.shift_multiplier(k, c * dt)
    spectrum += dt * spectral.forward(source.values) * spectral.shift_multiplier(k, 0.5 * c * dt)
    return FieldState(envelope.with_values(spectral.inverse(spectrum)), field.time + dt)


# ===== REDUCED TIER =====


class ReducedEquation:
    """
    Right-hand side of the uniform-condensate envelope equation, solved for E_t:

        (1 + beta/G^2) E_t = -c E_x + beta G'/G^3 E - i (beta/G^2)(Lambda + V1/hbar) E
                             + i (beta/G^2)(hbar/2M)(-kt^2 E - 2i kt E_x + E_xx)

    with beta = g^2|alpha|^2 and Lambda = mu + u12|alpha|^2.
    """

    def __init__(self, params: PhysicalParams, schedule: ControlSchedule, landscape: PotentialLandscape,
                 mu: float):
        self.params = params
        self.schedule = schedule
        self.landscape = landscape
        self.phase_rate = mu + params.u12 * params.alpha_mag ** 2
        self.threshold = STOP_THRESHOLD * params.g * params.alpha_mag
        self.k = landscape.grid.wavenumbers

    def __call__(self, values: np.ndarray, t: float) -> np.ndarray:
        p = self.params
        G = self.schedule.evaluate(t)
        if G <= self.threshold:
            raise StoppedLightError(
                f"reduced tier undefined for G={G:.3g} <= {STOP_THRESHOLD:g} g|alpha| at t={t:.6g}"
            )
        ratio = p.beta / (G * G)
        G_dot = self.schedule.derivative(t)
        E_x, E_xx = spectral.derivatives(values, self.k)
        v1 = self.landscape.values(1, t) / p.hbar

        rhs = -p.c * E_x + ratio * (G_dot / G) * values
        rhs = rhs - 1j * ratio * (self.phase_rate + v1) * values
        if p.kinetic_coefficient:
            kt = p.k_t
            rhs = rhs + 1j * ratio * p.kinetic_coefficient * (-kt * kt * values - 2j * kt * E_x + E_xx)
        return rhs / (1.0 + ratio)


def step_reduced(field: FieldState, t: float, dt: float, params: PhysicalParams, schedule: ControlSchedule,
                 V1=None, alpha_mag: Optional[float] = None, mu: Optional[float] = None,
                 equation: Optional[ReducedEquation] = None) -> FieldState:
    """
    One classical RK4 step of the reduced equation with spectral x-derivatives.

    Args:
        field: Envelope at t
        t: Start time
        dt: Step
        params: Constants
        schedule: Control schedule (G must stay above the stop threshold)
        V1: Level-1 potential (PotentialSpec or PotentialLandscape); static only
        alpha_mag: Condensate amplitude, defaults to params.alpha_mag
        mu: Condensate phase rate, defaults to params.mu
        equation: Prebuilt right-hand side (run loops reuse one)

    Returns:
        FieldState at t + dt
    """
    if equation is None:
        if alpha_mag is not None and alpha_mag != params.alpha_mag:
            params = replace(params, alpha_mag=alpha_mag)
        if isinstance(V1, PotentialSpec):
            V1 = replace(V1, level=1)
        grid = field.envelope.grid
        weight = IntegralWeightCache(schedule, params.g, params.alpha_mag)
        landscape = as_landscape(V1, grid, params.mass, params.c, weight)
        equation = ReducedEquation(params, schedule, landscape, params.mu if mu is None else mu)

    y = np.array(field.envelope.values)
    h = dt
    k1 = equation(y, t)
    k2 = equation(y + 0.5 * h * k1, t + 0.5 * h)
    k3 = equation(y + 0.5 * h * k2, t + 0.5 * h)
    k4 = equation(y + h * k3, t + h)
    y_new = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return FieldState(field.envelope.with_values(y_new), t + dt)


# ===== RUN LOOPS =====


def _series(config: SimulationConfig, tier: str) -> SnapshotSeries:
    return SnapshotSeries(
        tier=tier,
        snapshots=[],
        input_energy=config.pulse_field().norm_squared(),
        detection_plane=config.detection_plane,
    )


def run_reduced_tier(config: SimulationConfig) -> SnapshotSeries:
    """Integrate the reduced equation over the configured run; snapshots every stride steps"""
    if not config.uniform_medium:
        raise UnsupportedOperationError("the reduced tier needs a uniform condensate")
    params = config.params
    weight = IntegralWeightCache(config.control, params.g, params.alpha_mag)
    equation = ReducedEquation(params, config.control, config.landscape(weight), params.mu)

    started = time.time()
    field = FieldState(config.initial_field(), 0.0)
    snapshot_steps = set(config.snapshot_steps())
    series = _series(config, "reduced")
    series.snapshots.append(Snapshot(0.0, field.envelope, config.control.evaluate(0.0)))
    logger.info(f"[REDUCED] Starting {config.n_steps} steps, dt={config.dt}")

    for n in range(config.n_steps):
        t = n * config.dt
        field = step_reduced(field, t, config.dt, params, config.control, equation=equation)
        field = replace(field, time=(n + 1) * config.dt)
        if n + 1 in snapshot_steps:
            field.envelope.check_finite("envelope", n + 1)
            series.snapshots.append(Snapshot(field.time, field.envelope, config.control.evaluate(field.time)))
            logger.debug(f"[REDUCED] t={field.time:.4f} norm={field.envelope.norm():.6g}")

    series.steps = config.n_steps
    logger.info(f"[REDUCED] Finished in {time.time() - started:.2f}s")
    return series


def run_full_tier(config: SimulationConfig) -> SnapshotSeries:
    """
    Couple the atoms and the probe with a symmetric split per step:
    atoms dt/2 (envelope frozen), probe transport with the dipole source over
    dt, atoms dt/2 with the new envelope. With a detection plane set, the
    flux c |E(x_d)|^2 is recorded every step.
    """
    params = config.params
    grid = config.grid
    weight = IntegralWeightCache(config.control, params.g, params.alpha_mag)
    landscape = config.landscape(weight)

    started = time.time()
    field = FieldState(config.initial_field(), 0.0)
    state = initial_state(config, field.envelope)
    snapshot_steps = set(config.snapshot_steps())
    series = _series(config, "full")

    detector = None
    flux_times, flux = [], []
    if config.detection_plane is not None:
        detector = grid.nearest_index(config.detection_plane)
        flux_times.append(0.0)
        flux.append(params.c * abs(field.envelope.values[detector]) ** 2)

    def snapshot(t: float) -> Snapshot:
        atoms = {"psi2_0": state.psi2_0, "psi0_1": state.psi0_1, "psi1_1": state.psi1_1}
        return Snapshot(t, field.envelope, config.control.evaluate(t), atoms)

    series.snapshots.append(snapshot(0.0))
    logger.info(f"[FULL] Starting {config.n_steps} steps, dt={config.dt}")
    half = 0.5 * config.dt

    for n in range(config.n_steps):
        t = n * config.dt
        state = step_first_order(state, field.envelope, t, half, params, landscape, config.control, weight)
        source = dipole_source(state.psi2_0, state.psi0_1, params.k_F, params.g)
        field = advect_step(field, source, config.dt, params.c)
        state = step_first_order(state, field.envelope, t + half, half, params, landscape, config.control,
                                 weight)
        t_next = (n + 1) * config.dt
        field = FieldState(field.envelope, t_next)

        if detector is not None:
            flux_times.append(t_next)
            flux.append(params.c * abs(field.envelope.values[detector]) ** 2)

        if n + 1 in snapshot_steps:
            field.envelope.check_finite("envelope", n + 1)
            state.psi0_1.check_finite("psi0_1", n + 1)
            state.psi1_1.check_finite("psi1_1", n + 1)
            state.psi2_0.check_finite("psi2_0", n + 1)
            series.snapshots.append(snapshot(t_next))
            logger.debug(f"[FULL] t={t_next:.4f} norm={field.envelope.norm():.6g}")

    if detector is not None:
        series.detection_times = np.array(flux_times)
        series.detection_flux = np.array(flux)
    series.steps = config.n_steps
    logger.info(f"[FULL] Finished in {time.time() - started:.2f}s")
    return series
