"""
src/model/simulation_config.py - Simulation Configuration
Everything a run needs, validated once on construction: grid, constants,
control schedule, potentials, initial profiles, stepping and solver tier.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from src.config.settings import (
    FULL_TIER_RATE_BOUND,
    GPE_NONLINEAR_BOUND,
    MIN_POINTS_PER_WIDTH,
    MIN_WIDTHS_TO_BOUNDARY,
    PHASE_PER_SNAPSHOT_BOUND,
    REDUCED_TIER_RK4_BOUND,
)
from src.model.control import ControlSchedule
from src.model.errors import ConfigValidationError, StabilityBoundError
from src.model.fields import ComplexField1D
from src.model.grid import Grid1D
from src.model.params import PhysicalParams, amplitude_factor, chemical_phase_rate, coupling_ratio
from src.model.potentials import PotentialLandscape, PotentialSpec
from src.model.profiles import PulseSpec, SlabCondensate, UniformCondensate

logger = logging.getLogger(__name__)


class SolverTier(str, Enum):
    FULL = "full"
    REDUCED = "reduced"
    ANALYTIC = "analytic"


def default_potentials() -> Tuple[PotentialSpec, PotentialSpec, PotentialSpec]:
    return (
        PotentialSpec(level=0),
        PotentialSpec(level=1, frame="comoving"),
        PotentialSpec(level=2),
    )


@dataclass(frozen=True, eq=False)
class SimulationConfig:
    grid: Grid1D
    params: PhysicalParams
    control: ControlSchedule
    pulse: PulseSpec
    condensate: object = field(default_factory=UniformCondensate)
    potentials: Tuple[PotentialSpec, ...] = field(default_factory=default_potentials)
    dt: float = 0.05
    t_final: float = 10.0
    snapshot_stride: int = 10
    solver_tier: SolverTier = SolverTier.REDUCED
    n_substeps: int = 64
    detection_plane: Optional[float] = None
    mu_consistent: bool = field(default=True, init=False)

    def __post_init__(self):
        try:
            object.__setattr__(self, "solver_tier", SolverTier(self.solver_tier))
        except ValueError:
            raise ConfigValidationError(
                f"must be one of {[t.value for t in SolverTier]}, got {self.solver_tier!r}", key="run.tier"
            )
        if not isinstance(self.condensate, (UniformCondensate, SlabCondensate)):
            raise ConfigValidationError("unknown condensate layout", key="condensate.kind")

        by_level = {p.level: p for p in default_potentials()}
        for spec in self.potentials:
            by_level[spec.level] = spec
        object.__setattr__(self, "potentials", tuple(by_level[level] for level in (0, 1, 2)))

        if not math.isfinite(self.dt) or self.dt <= 0:
            raise ConfigValidationError(f"must be positive, got {self.dt}", key="run.dt")
        if not math.isfinite(self.t_final) or self.t_final <= 0:
            raise ConfigValidationError(f"must be positive, got {self.t_final}", key="run.t_final")
        if int(self.snapshot_stride) != self.snapshot_stride or self.snapshot_stride < 1:
            raise ConfigValidationError(f"must be an integer >= 1, got {self.snapshot_stride}", key="run.stride")
        if int(self.n_substeps) != self.n_substeps or self.n_substeps < 1:
            raise ConfigValidationError(f"must be an integer >= 1, got {self.n_substeps}", key="run.n_substeps")
        object.__setattr__(self, "snapshot_stride", int(self.snapshot_stride))
        object.__setattr__(self, "n_substeps", int(self.n_substeps))

        steps = self.t_final / self.dt
        if abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
            raise ConfigValidationError(
                f"t_final={self.t_final} is not a whole number of steps dt={self.dt}", key="run.t_final"
            )
        if self.detection_plane is not None and not math.isfinite(self.detection_plane):
            raise ConfigValidationError("must be finite", key="run.detection_plane")

        self._resolve_mu()
        self.validate()

    # ===== DERIVED VALUES =====

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))

    @property
    def beta(self) -> float:
        return self.params.beta

    @property
    def uniform_medium(self) -> bool:
        return isinstance(self.condensate, UniformCondensate)

    def potential(self, level: int) -> PotentialSpec:
        return self.potentials[level]

    def snapshot_steps(self) -> Tuple[int, ...]:
        """Step indices at which snapshots are taken (0, stride, ..., and the last step)"""
        steps = list(range(0, self.n_steps + 1, self.snapshot_stride))
        if steps[-1] != self.n_steps:
            steps.append(self.n_steps)
        return tuple(steps)

    def snapshot_times(self) -> np.ndarray:
        return np.array(self.snapshot_steps(), dtype=float) * self.dt

    def landscape(self, weight=None) -> PotentialLandscape:
        return PotentialLandscape(self.grid, self.potentials, self.params.mass, self.params.c, weight)

    def pulse_field(self) -> ComplexField1D:
        """The pulse as specified, before any amplitude factor"""
        return self.pulse.evaluate(self.grid, self.params.c)

    def initial_field(self) -> ComplexField1D:
        """
        Envelope at t = 0: the in-medium field A(G(0)) * pulse for a uniform
        medium, the bare pulse for a slab (the pulse starts in vacuum).
        """
        pulse = self.pulse_field()
        if not self.uniform_medium:
            return pulse
        factor = amplitude_factor(self.control.evaluate(0.0), self.params.g, self.params.alpha_mag)
        return pulse.with_values(factor * pulse.values)

    def with_updates(self, **changes) -> "SimulationConfig":
        """Validated copy with some fields replaced"""
        return dataclasses.replace(self, **changes)

    # ===== MU RESOLUTION =====

    def _resolve_mu(self) -> None:
        p = self.params
        v2 = self.potentials[2].uniform_value
        derived = None
        if v2 is not None:
            derived = chemical_phase_rate(v2, p.u2, p.alpha_mag, p.hbar)

        consistent = True
        if p.mu is None:
            mu = derived if derived is not None else 0.0
            if derived is None:
                logger.info("[CONFIG] Level-2 potential is not uniform; using mu = 0")
        else:
            mu = p.mu
            if derived is not None and abs(mu - derived) > 1e-12 * max(1.0, abs(derived)):
                consistent = False
                logger.warning(
                    f"[CONFIG] mu={mu} disagrees with the uniform-condensate value {derived}; keeping mu={mu}"
                )
        object.__setattr__(self, "params", dataclasses.replace(p, mu=mu))
        object.__setattr__(self, "mu_consistent", consistent)

    # ===== VALIDATION =====

    def validate(self) -> None:
        """Raise ConfigValidationError/StabilityBoundError if the run is not well posed"""
        self._check_pulse_support()
        self._check_phase_per_snapshot()
        if self.solver_tier == SolverTier.FULL:
            self._check_full_tier()
        elif self.solver_tier == SolverTier.REDUCED:
            self._check_reduced_tier()
        for spec in self.potentials:
            if spec.kind == "harmonic" and math.isinf(self.params.mass):
                raise ConfigValidationError("a harmonic potential needs a finite mass", key="params.M")
            if spec.kind == "tabulated":
                spec.evaluate(self.grid.coordinates)

    def _check_pulse_support(self) -> None:
        field_0 = self.pulse_field()
        # only parametric pulses carry a width and a center
        width = getattr(self.pulse, "width", None)
        center = getattr(self.pulse, "center", None)
        if width is None:
            return
        dx = self.grid.spacing
        if width < MIN_POINTS_PER_WIDTH * dx:
            raise ConfigValidationError(
                f"pulse width {width} is below {MIN_POINTS_PER_WIDTH} grid spacings ({dx})", key="pulse.width"
            )
        half = 0.5 * self.grid.length
        if abs(center) + MIN_WIDTHS_TO_BOUNDARY * width > half:
            raise ConfigValidationError(
                f"pulse center {center} is closer than {MIN_WIDTHS_TO_BOUNDARY} widths to the boundary",
                key="pulse.center",
            )
        if field_0.norm_squared() == 0.0:
            logger.warning("[CONFIG] Pulse has zero energy")

    def _check_phase_per_snapshot(self) -> None:
        advance = abs(self.params.phase_rate) * self.dt * self.snapshot_stride
        if advance >= PHASE_PER_SNAPSHOT_BOUND:
            raise StabilityBoundError(
                f"phase advance per snapshot |mu + u12|alpha|^2| * dt * stride = {advance:.4g} must be < pi",
                key="run.stride",
            )

    def _check_full_tier(self) -> None:
        p = self.params
        G_max = self.control.upper_bound()
        E_max = self.initial_field().max_abs()
        rates = {
            "gamma/2": 0.5 * p.gamma,
            "|Delta|/10": abs(p.Delta) / 10.0,
            "G_max": G_max,
            "g|E|_max": p.g * E_max,
            "g|alpha|": p.g * p.alpha_mag,
        }
        name, rate = max(rates.items(), key=lambda item: item[1])
        if self.dt * rate >= FULL_TIER_RATE_BOUND:
            raise StabilityBoundError(
                f"full tier needs dt * max(gamma/2, |Delta|/10, G_max, g|E|_max, g|alpha|) < "
                f"{FULL_TIER_RATE_BOUND}; got dt * {name} = {self.dt * rate:.4g}",
                key="run.dt",
            )
        nonlinear = abs(2.0 * p.u2 * p.alpha_mag ** 2 * self.dt)
        if nonlinear >= GPE_NONLINEAR_BOUND:
            raise StabilityBoundError(
                f"condensate step needs |2 u2 |alpha|^2 dt| < {GPE_NONLINEAR_BOUND}; got {nonlinear:.4g}",
                key="run.dt",
            )
        landscape = self.landscape(weight=lambda t: self.control.integral_weight(t, p.g, p.alpha_mag))
        local = max(landscape.max_abs(0), landscape.max_abs(1, (0.0, self.t_final))) / p.hbar
        local += (abs(p.u02) + abs(p.u12)) * p.alpha_mag ** 2
        if self.dt * local >= REDUCED_TIER_RK4_BOUND:
            raise StabilityBoundError(
                f"full tier needs dt * max|V_j|/hbar < {REDUCED_TIER_RK4_BOUND}; got {self.dt * local:.4g}",
                key="run.dt",
            )

    def _check_reduced_tier(self) -> None:
        p = self.params
        times = np.unique(np.concatenate([
            np.linspace(0.0, self.t_final, 2001),
            [t for t in self.control.breakpoints() if 0.0 <= t <= self.t_final],
        ]))
        G_values = np.array([self.control.evaluate(t) for t in times])
        G_min, G_max = float(np.min(G_values)), float(np.max(G_values))
        kappa_max = coupling_ratio(G_min, p.g, p.alpha_mag)
        v_max = p.c * (1.0 - coupling_ratio(G_max, p.g, p.alpha_mag)) if p.beta > 0 else p.c

        k_nyq = self.grid.nyquist
        advection = v_max * k_nyq
        kinetic = kappa_max * p.kinetic_coefficient * (k_nyq + abs(p.k_t)) ** 2
        landscape = self.landscape(weight=lambda t: self.control.integral_weight(t, p.g, p.alpha_mag))
        potential = kappa_max * (abs(p.phase_rate) + landscape.max_abs(1, (0.0, self.t_final)) / p.hbar)
        total = self.dt * (advection + kinetic + potential)
        if self.dt * advection >= 2.0 or self.dt * kinetic >= 2.0 or total >= REDUCED_TIER_RK4_BOUND:
            raise StabilityBoundError(
                f"reduced tier needs dt * v_g,max * k_Nyquist < 2 (got {self.dt * advection:.4g}), "
                f"dt * kappa_max * hbar k_Nyquist^2 / 2M < 2 (got {self.dt * kinetic:.4g}) and a total "
                f"RK4 rate below {REDUCED_TIER_RK4_BOUND} (got {total:.4g})",
                key="run.dt",
            )
