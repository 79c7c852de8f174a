"""
src/diagnostics/validation.py - Fits, Scans and Residual Checks
Velocity, effective-mass and oscillation fits over snapshot diagnostics,
the transparency scan over probe or one-photon detuning, and the residual
of the uniform-condensate envelope equation for any snapshot series.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from src.config.settings import (
    EXPANSION_FIT_RESIDUAL,
    KURTOSIS_TOLERANCE,
    MIN_FIT_SNAPSHOTS,
    SCAN_WORKERS,
)
from src.model import spectral
from src.model.control import ControlSchedule, IntegralWeightCache
from src.model.errors import (
    ConfigValidationError,
    FitQualityError,
    GridMismatchError,
    StoppedLightError,
    UnsupportedOperationError,
)
from src.model.fields import ComplexField1D
from src.model.params import PhysicalParams
from src.model.potentials import PotentialSpec, as_landscape
from src.model.profiles import GaussianPulse
from src.model.simulation_config import SimulationConfig, SolverTier
from src.diagnostics.measurements import PulseDiagnostics
from src.solvers.field_propagation import run_full_tier

logger = logging.getLogger(__name__)

SCAN_PARAMETERS = ("Delta", "delta")


# ===== FITS =====


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    slope_stderr: float
    rms_residual: float


def _require_series(series: Sequence[PulseDiagnostics]) -> Tuple[np.ndarray, List[PulseDiagnostics]]:
    series = list(series)
    if len(series) < MIN_FIT_SNAPSHOTS:
        raise FitQualityError(f"need at least {MIN_FIT_SNAPSHOTS} snapshots, got {len(series)}")
    if not all(d.defined for d in series):
        raise FitQualityError("series contains snapshots without a defined pulse")
    times = np.array([d.time for d in series], dtype=float)
    if np.any(np.diff(times) <= 0):
        raise FitQualityError("snapshot times must be strictly increasing")
    return times, series


def linear_fit(x: np.ndarray, y: np.ndarray) -> LinearFit:
    """Ordinary least squares y = slope x + intercept"""
    design = np.column_stack([x, np.ones_like(x)])
    coefficients, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < 2:
        raise FitQualityError("degenerate fit: abscissae are all equal")
    slope, intercept = coefficients
    residual = y - design @ coefficients
    dof = max(len(x) - 2, 1)
    sigma2 = float(np.sum(residual ** 2)) / dof
    spread = float(np.sum((x - np.mean(x)) ** 2))
    stderr = math.sqrt(sigma2 / spread) if spread > 0 else math.inf
    return LinearFit(float(slope), float(intercept), stderr, float(np.sqrt(np.mean(residual ** 2))))


def fit_velocity_detailed(series: Sequence[PulseDiagnostics]) -> LinearFit:
    times, series = _require_series(series)
    return linear_fit(times, np.array([d.center for d in series]))


def fit_velocity(series: Sequence[PulseDiagnostics]) -> float:
    """Least-squares slope of the pulse center against time"""
    fit = fit_velocity_detailed(series)
    logger.debug(f"[FIT] velocity={fit.slope:.6g} +/- {fit.slope_stderr:.2g}, rms={fit.rms_residual:.3g}")
    return fit.slope


def fit_expansion_mass(series: Sequence[PulseDiagnostics], hbar: float = 1.0, c: float = 1.0) -> float:
    """
    Effective mass from free Gaussian spreading, width^2 = a + b t^2 and
    M_eff = hbar / (2 sqrt(a b)). Widths are multiplied by c, so series
    measured on the pulse-frame u-grid come out in length units.

    Raises:
        FitQualityError: initial profile not Gaussian (kurtosis), no
            spreading, or relative RMS residual above 1%
    """
    times, series = _require_series(series)
    first = series[0]
    if not math.isfinite(first.kurtosis) or abs(first.kurtosis - 3.0) > KURTOSIS_TOLERANCE:
        raise FitQualityError(f"initial profile is not Gaussian (kurtosis {first.kurtosis:.4g})")

    widths2 = (c * np.array([d.width for d in series])) ** 2
    fit = linear_fit(times ** 2, widths2)
    a, b = fit.intercept, fit.slope
    if a <= 0 or b <= 0:
        raise FitQualityError(f"no free spreading in the series (a={a:.3g}, b={b:.3g})")
    relative = fit.rms_residual / float(np.mean(widths2))
    if relative > EXPANSION_FIT_RESIDUAL:
        raise FitQualityError(f"width^2 = a + b t^2 fits poorly (relative RMS {relative:.3g})")
    mass = hbar / (2.0 * math.sqrt(a * b))
    logger.debug(f"[FIT] expansion mass={mass:.6g} (a={a:.4g}, b={b:.4g}, rms={relative:.2g})")
    return mass


def fit_oscillation_frequency(series: Sequence[PulseDiagnostics]) -> float:
    """
    Angular frequency of the pulse center: FFT peak as the starting guess,
    refined by a least-squares sinusoid A cos(w t) + B sin(w t) + C.
    """
    times, series = _require_series(series)
    centers = np.array([d.center for d in series])
    steps = np.diff(times)
    if not np.allclose(steps, steps[0], rtol=1e-6):
        raise FitQualityError("oscillation fit needs uniformly spaced snapshots")
    signal = centers - np.mean(centers)
    if np.max(np.abs(signal)) == 0.0:
        raise FitQualityError("pulse center does not move")

    padded = 16 * len(signal)
    spectrum = np.abs(np.fft.rfft(signal, n=padded))
    frequencies = np.fft.rfftfreq(padded, d=steps[0])
    peak = int(np.argmax(spectrum[1:])) + 1
    omega0 = 2.0 * math.pi * frequencies[peak]

    def model(t, amp_cos, amp_sin, offset, omega):
        return amp_cos * np.cos(omega * t) + amp_sin * np.sin(omega * t) + offset

    guess = [signal[0], 0.0, float(np.mean(centers)), omega0]
    try:
        popt, _ = optimize.curve_fit(model, times, centers, p0=guess, maxfev=20000)
    except RuntimeError as exc:
        raise FitQualityError(f"oscillation fit did not converge: {exc}")
    omega = abs(float(popt[3]))
    logger.debug(f"[FIT] oscillation omega={omega:.6g} (FFT guess {omega0:.6g})")
    return omega


# ===== TRANSPARENCY SCAN =====


@dataclass(frozen=True)
class ScanTable:
    parameter: str
    values: Tuple[float, ...]
    transmissions: Tuple[float, ...]

    @property
    def rows(self) -> List[Tuple[float, float]]:
        return list(zip(self.values, self.transmissions))


def scan_config(base_config: SimulationConfig, parameter: str, value: float) -> SimulationConfig:
    """base_config with one detuning replaced, run on the full tier"""
    if parameter == "Delta":
        return base_config.with_updates(params=replace(base_config.params, Delta=float(value)),
                                        solver_tier=SolverTier.FULL)
    if parameter == "delta":
        if not isinstance(base_config.pulse, GaussianPulse):
            raise UnsupportedOperationError("a probe-detuning scan needs a Gaussian pulse")
        return base_config.with_updates(pulse=replace(base_config.pulse, detuning=float(value)),
                                        solver_tier=SolverTier.FULL)
    raise ConfigValidationError(f"unknown scan parameter {parameter!r}; expected one of {SCAN_PARAMETERS}",
                                key="scan.parameter")


def transparency_scan(base_config: SimulationConfig, values: Sequence[float], parameter: str = "delta",
                      workers: Optional[int] = None) -> ScanTable:
    """
    Transmitted energy fraction past the detection plane for each detuning
    value, one full-tier run per value. Runs are independent and execute on
    a thread pool; the table keeps the input order.
    """
    values = [float(v) for v in values]
    if not values:
        raise ConfigValidationError("scan needs at least one value", key="scan.values")
    if base_config.detection_plane is None:
        raise ConfigValidationError("a transparency scan needs a detection plane", key="run.detection_plane")
    configs = [scan_config(base_config, parameter, v) for v in values]

    def run_one(config: SimulationConfig) -> float:
        return run_full_tier(config).transmitted_fraction()

    workers = min(workers or SCAN_WORKERS, len(configs))
    logger.info(f"[SCAN] {parameter} over {len(values)} values with {workers} workers")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        transmissions = list(pool.map(run_one, configs))
    for value, fraction in zip(values, transmissions):
        logger.info(f"[SCAN] {parameter}={value:+.4g} transmission={fraction:.4g}")
    return ScanTable(parameter, tuple(values), tuple(transmissions))


def transparency_fwhm(table: ScanTable) -> float:
    """
    Full width at half maximum of the transmission feature around its
    maximum, half-max crossings found by linear interpolation. A side that
    never drops below half counts up to the scan edge.
    """
    x = np.array(table.values, dtype=float)
    y = np.array(table.transmissions, dtype=float)
    order = np.argsort(x)
    x, y = x[order], y[order]
    peak = int(np.argmax(y))
    half = 0.5 * y[peak]

    def crossing(indices) -> float:
        previous = peak
        for j in indices:
            if y[j] < half:
                fraction = (y[previous] - half) / (y[previous] - y[j])
                return float(x[previous] + fraction * (x[j] - x[previous]))
            previous = j
        logger.warning("[SCAN] Transmission never drops to half maximum; using the scan edge")
        return float(x[previous])

    left = crossing(range(peak - 1, -1, -1))
    right = crossing(range(peak + 1, len(x)))
    return right - left


# ===== RESIDUAL OF THE ENVELOPE EQUATION =====


@dataclass(frozen=True, eq=False)
class ResidualReport:
    """Residual fields and norms at the interior snapshot times"""

    times: np.ndarray
    residuals: Tuple[ComplexField1D, ...]
    norms: np.ndarray
    relative: np.ndarray

    @property
    def max_relative(self) -> float:
        return float(np.max(self.relative)) if len(self.relative) else 0.0


def uniform_alpha_series(grid, params: PhysicalParams, times: Sequence[float]) -> List[ComplexField1D]:
    """alpha exp(i mu t) at each time"""
    mu = params.mu or 0.0
    return [ComplexField1D.uniform(grid, params.alpha_mag * np.exp(1j * mu * float(t))) for t in times]


def reduced_pde_residual(envelope_series: Sequence[ComplexField1D], alpha_series: Sequence[ComplexField1D],
                         schedule: ControlSchedule, params: PhysicalParams, times: Sequence[float],
                         V1=None) -> ResidualReport:
    """
    Residual of the envelope equation with a general condensate alpha(x, t):

        E_t + c E_x + (g^2 conj(alpha)/G) [ (E alpha)_t / G - G' E alpha / G^2
            - (i hbar / 2MG)(-kt^2 - 2i kt d/dx + d2/dx2)(E alpha)
            + i V1 E alpha / (hbar G) + i u12 |alpha|^2 E alpha / G ]

    d/dt is the fourth-order central difference, so the series must be
    uniformly spaced and the report covers snapshots 2 .. n-3.
    """
    envelopes = list(envelope_series)
    alphas = list(alpha_series)
    times = np.asarray(times, dtype=float)
    if not (len(envelopes) == len(alphas) == len(times)):
        raise GridMismatchError(
            f"series lengths differ: {len(envelopes)} envelopes, {len(alphas)} alphas, {len(times)} times"
        )
    if len(times) < 5:
        raise GridMismatchError("need at least 5 snapshots for the fourth-order time derivative")
    steps = np.diff(times)
    if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise GridMismatchError("snapshot times must be uniformly spaced")
    grid = envelopes[0].grid
    for field in envelopes + alphas:
        envelopes[0].require_same_grid(field)

    h = float(steps[0])
    k = grid.wavenumbers
    if isinstance(V1, PotentialSpec):
        V1 = replace(V1, level=1)
    landscape = as_landscape(V1, grid, params.mass, params.c,
                             IntegralWeightCache(schedule, params.g, params.alpha_mag))
    E = np.array([f.values for f in envelopes])
    P = np.array([e.values * a.values for e, a in zip(envelopes, alphas)])

    def d_dt(series: np.ndarray, i: int) -> np.ndarray:
        return (-series[i + 2] + 8.0 * series[i + 1] - 8.0 * series[i - 1] + series[i - 2]) / (12.0 * h)

    report_times, residuals, norms, relative = [], [], [], []
    for i in range(2, len(times) - 2):
        t = float(times[i])
        G = schedule.evaluate(t)
        if G <= 0.0:
            raise StoppedLightError(f"envelope equation residual undefined for G=0 at t={t:.6g}")
        G_dot = schedule.derivative(t)
        alpha = alphas[i].values
        E_x = spectral.derivative(E[i], k, 1)
        P_x, P_xx = spectral.derivatives(P[i], k)
        kinetic = -params.k_t ** 2 * P[i] - 2j * params.k_t * P_x + P_xx
        bracket = (
            d_dt(P, i) / G
            - G_dot * P[i] / G ** 2
            - 1j * params.kinetic_coefficient / G * kinetic
            + 1j * landscape.values(1, t) * P[i] / (params.hbar * G)
            + 1j * params.u12 * np.abs(alpha) ** 2 * P[i] / G
        )
        residual = d_dt(E, i) + params.c * E_x + (params.g ** 2 * np.conj(alpha) / G) * bracket
        field = envelopes[i].with_values(residual)
        norm = field.norm()
        scale = envelopes[i].norm()
        report_times.append(t)
        residuals.append(field)
        norms.append(norm)
        relative.append(norm / scale if scale > 0 else 0.0)

    return ResidualReport(np.array(report_times), tuple(residuals), np.array(norms), np.array(relative))
