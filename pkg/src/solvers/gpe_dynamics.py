"""
src/solvers/gpe_dynamics.py - Condensate Dynamics
Zeroth-order Gross-Pitaevskii evolution of the level-2 condensate and the
first-order coherences psi0, psi1 driven by the probe envelope.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.config.settings import FULL_TIER_RATE_BOUND, GPE_NONLINEAR_BOUND
from src.model import spectral
from src.model.control import ControlSchedule, IntegralWeightCache
from src.model.errors import StabilityBoundError, StoppedLightError
from src.model.fields import ComplexField1D
from src.model.params import PhysicalParams
from src.model.potentials import PotentialLandscape, PotentialSpec, as_landscape

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CondensateState:
    """
    Atomic fields at one time: the condensate psi2 (zeroth order) and the
    coherences psi0, psi1 (first order in the probe).
    """

    psi2_0: ComplexField1D
    psi0_1: ComplexField1D
    psi1_1: ComplexField1D
    time: float = 0.0

    def __post_init__(self):
        self.psi2_0.require_same_grid(self.psi0_1)
        self.psi2_0.require_same_grid(self.psi1_1)

    @property
    def grid(self):
        return self.psi2_0.grid


# ===== ZEROTH ORDER =====


def step_gpe_zeroth(psi2_0: ComplexField1D, dt: float, params: PhysicalParams,
                    V2: Optional[object] = None) -> ComplexField1D:
    """
    One Strang step of i hbar psi_t = -hbar^2/2M psi_xx + V2 psi + 2 hbar u2 |psi|^2 psi:
    half local phase, full kinetic step in Fourier space, half local phase.

    Args:
        psi2_0: Condensate at t
        dt: Step (may be negative for backward evolution in tests)
        params: Constants; mass = inf disables the kinetic step
        V2: Level-2 potential, as a PotentialSpec or sampled array

    Returns:
        Condensate at t + dt
    """
    grid = psi2_0.grid
    psi = np.array(psi2_0.values)
    peak = float(np.max(np.abs(psi))) if psi.size else 0.0
    nonlinear = abs(2.0 * params.u2 * peak ** 2 * dt)
    if nonlinear >= GPE_NONLINEAR_BOUND:
        raise StabilityBoundError(
            f"condensate step needs |2 u2 |psi|^2 dt| < {GPE_NONLINEAR_BOUND}; got {nonlinear:.4g}",
            key="run.dt",
        )

    if V2 is None:
        v2 = np.zeros(grid.n_points)
    elif isinstance(V2, PotentialSpec):
        v2 = V2.evaluate(grid.coordinates, params.mass)
    else:
        v2 = np.asarray(V2, dtype=float)

    def local_phase(values: np.ndarray, h: float) -> np.ndarray:
        # |psi| is unchanged by the phase, so this sub-step is exact
        rate = v2 / params.hbar + 2.0 * params.u2 * np.abs(values) ** 2
        return values * np.exp(-1j * rate * h)

    psi = local_phase(psi, 0.5 * dt)
    if not np.isinf(params.mass):
        psi = spectral.apply_multiplier(
            psi, spectral.kinetic_propagator(grid.wavenumbers, params.hbar, params.mass, dt)
        )
    psi = local_phase(psi, 0.5 * dt)
    return psi2_0.with_values(psi)


def initial_condensate(config) -> ComplexField1D:
    """psi2(x, 0) = alpha times the condensate layout (uniform or slab)"""
    profile = config.condensate.profile(config.grid)
    return ComplexField1D(config.grid, config.params.alpha_mag * profile)


# ===== FIRST ORDER =====


def dark_state_psi1(envelope: ComplexField1D, psi2_0: ComplexField1D, G: float,
                    params: PhysicalParams) -> ComplexField1D:
    """psi1 = -(g E exp(i kF x) / G) exp(-i kG x) psi2, the dark state of the probe envelope"""
    envelope.require_same_grid(psi2_0)
    if G <= 0.0:
        raise StoppedLightError(f"dark state undefined for G={G}")
    # exp(i kF x) exp(-i kG x) = exp(-i kt x)
    carried = envelope.with_carrier(-params.k_t)
    return envelope.with_values(-(params.g / G) * carried.values * psi2_0.values)


def initial_state(config, envelope: ComplexField1D) -> CondensateState:
    """Atoms at t = 0: the dark state for a uniform medium, the ground state otherwise"""
    psi2 = initial_condensate(config)
    zeros = ComplexField1D.zeros(config.grid)
    G0 = config.control.evaluate(0.0)
    if config.condensate.initial_coherence == "dark" and G0 > 0:
        psi1 = dark_state_psi1(envelope, psi2, G0, config.params)
    else:
        psi1 = zeros
    return CondensateState(psi2, zeros, psi1, 0.0)


def _interaction_multipliers(grid, params: PhysicalParams, h: float) -> Tuple[np.ndarray, np.ndarray]:
    """exp(D h/2) for psi0 (kinetic, detuning, decay) and psi1 (kinetic)"""
    k = grid.wavenumbers
    kinetic = -1j * params.kinetic_coefficient * k ** 2
    d0 = kinetic - 1j * params.Delta - 0.5 * params.gamma
    d1 = kinetic
    return np.exp(0.5 * h * d0), np.exp(0.5 * h * d1)


def step_first_order(state: CondensateState, envelope: ComplexField1D, t: float, dt: float,
                     params: PhysicalParams, potentials, schedule: ControlSchedule,
                     weight=None) -> CondensateState:
    """
    Advance psi0, psi1 (and psi2 underneath) by dt with the envelope held fixed.

    Interaction-picture RK4: kinetic energy, detuning and decay are applied
    exactly in Fourier space; potentials, collisional shifts, the control
    coupling and the probe source go through RK4. psi2 at the RK4 stage
    times comes from two half steps of step_gpe_zeroth.

    Args:
        state: Atomic fields at t
        envelope: Probe envelope, frozen over the step
        t: Start time
        dt: Step length
        params: Constants (mu already resolved)
        potentials: PotentialLandscape, or a sequence of PotentialSpec
        schedule: Control schedule G(t)
        weight: W(t) evaluator, needed for a co-moving level-1 potential

    Returns:
        CondensateState at t + dt
    """
    envelope.require_same_grid(state.psi2_0)
    grid = state.grid
    if weight is None:
        weight = IntegralWeightCache(schedule, params.g, params.alpha_mag)
    landscape: PotentialLandscape = as_landscape(potentials, grid, params.mass, params.c, weight)

    G_stages = (schedule.evaluate(t), schedule.evaluate(t + 0.5 * dt), schedule.evaluate(t + dt))
    rate = max(0.5 * params.gamma, max(G_stages), params.g * envelope.max_abs())
    if dt * rate >= FULL_TIER_RATE_BOUND:
        raise StabilityBoundError(
            f"first-order step needs dt * max(gamma/2, G, g|E|) < {FULL_TIER_RATE_BOUND}; got {dt * rate:.4g}",
            key="run.dt",
        )

    v2 = landscape.values(2, t)
    psi2_start = state.psi2_0
    psi2_mid = step_gpe_zeroth(psi2_start, 0.5 * dt, params, v2)
    psi2_end = step_gpe_zeroth(psi2_mid, 0.5 * dt, params, v2)

    x = grid.coordinates
    plus = np.exp(1j * params.k_G * x)
    drive = params.g * envelope.values * np.exp(1j * params.k_F * x)
    v0 = landscape.values(0, t) / params.hbar
    hbar = params.hbar

    def rhs(y0, y1, tau, G, psi2):
        density = np.abs(psi2) ** 2
        v1 = landscape.values(1, tau) / hbar
        f0 = -1j * (v0 + params.u02 * density) * y0 - 1j * G * plus * y1 - 1j * drive * psi2
        f1 = -1j * (v1 + params.u12 * density) * y1 - 1j * G * np.conj(plus) * y0
        return f0, f1

    m0, m1 = _interaction_multipliers(grid, params, dt)

    def half(y0, y1):
        return spectral.apply_multiplier(y0, m0), spectral.apply_multiplier(y1, m1)

    y0, y1 = np.array(state.psi0_1.values), np.array(state.psi1_1.values)
    stages = (
        (t, G_stages[0], psi2_start.values),
        (t + 0.5 * dt, G_stages[1], psi2_mid.values),
        (t + dt, G_stages[2], psi2_end.values),
    )

    yi0, yi1 = half(y0, y1)
    a0, a1 = rhs(y0, y1, *stages[0])
    k10, k11 = half(dt * a0, dt * a1)
    a0, a1 = rhs(yi0 + 0.5 * k10, yi1 + 0.5 * k11, *stages[1])
    k20, k21 = dt * a0, dt * a1
    a0, a1 = rhs(yi0 + 0.5 * k20, yi1 + 0.5 * k21, *stages[1])
    k30, k31 = dt * a0, dt * a1
    e0, e1 = half(yi0 + k30, yi1 + k31)
    a0, a1 = rhs(e0, e1, *stages[2])
    k40, k41 = dt * a0, dt * a1
    n0, n1 = half(yi0 + k10 / 6.0 + k20 / 3.0 + k30 / 3.0, yi1 + k11 / 6.0 + k21 / 3.0 + k31 / 3.0)

    return CondensateState(
        psi2_0=psi2_end,
        psi0_1=state.psi0_1.with_values(n0 + k40 / 6.0),
        psi1_1=state.psi1_1.with_values(n1 + k41 / 6.0),
        time=t + dt,
    )


def adiabatic_psi0(psi1_before: ComplexField1D, psi1_after: ComplexField1D, spacing: float,
                   psi1: ComplexField1D, psi2_0: ComplexField1D, G: float, params: PhysicalParams,
                   V1: Optional[np.ndarray] = None) -> ComplexField1D:
    """
    Excited-state coherence implied by psi1 under adiabatic elimination:
        psi0 = (i exp(i kG x) / G) (d/dt - i hbar/2M d2/dx2 + i V1/hbar + i u12 |psi2|^2) psi1
    with a centred difference of psi1_before / psi1_after (separated by 2 * spacing).
    """
    for other in (psi1_before, psi1_after, psi2_0):
        psi1.require_same_grid(other)
    if G <= 0.0:
        raise StoppedLightError("adiabatic elimination needs G > 0")
    grid = psi1.grid
    v1 = np.zeros(grid.n_points) if V1 is None else np.asarray(V1, dtype=float)
    dpsi_dt = (psi1_after.values - psi1_before.values) / (2.0 * spacing)
    psi1_xx = spectral.derivative(psi1.values, grid.wavenumbers, 2)
    bracket = (
        dpsi_dt
        - 1j * params.kinetic_coefficient * psi1_xx
        + 1j * (v1 / params.hbar) * psi1.values
        + 1j * params.u12 * np.abs(psi2_0.values) ** 2 * psi1.values
    )
    return psi1.with_values((1j / G) * np.exp(1j * params.k_G * grid.coordinates) * bracket)

