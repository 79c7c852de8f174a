"""
src/model/control.py - Control Field Schedules
Real, non-negative Rabi-frequency schedules G(t) and the pulse-frame weight
W(t) = integral of G^2 / (g^2|alpha|^2 + G^2)
"""

import logging
import math
from dataclasses import dataclass
from typing import ClassVar, Dict, Tuple

import numpy as np
from scipy import integrate

from src.config.settings import QUAD_LIMIT, QUAD_RTOL
from src.model.errors import ConfigValidationError, DomainError
from src.model.params import coupling_ratio

logger = logging.getLogger(__name__)


def _check_time(t: float) -> float:
    if not math.isfinite(t) or t < 0:
        raise DomainError(f"schedule time must be finite and >= 0, got {t}")
    return float(t)


def _non_negative(value: float, key: str) -> float:
    if not math.isfinite(value) or value < 0:
        raise ConfigValidationError(f"must be finite and >= 0, got {value}", key=key)
    return float(value)


def _positive(value: float, key: str) -> float:
    if not math.isfinite(value) or value <= 0:
        raise ConfigValidationError(f"must be finite and > 0, got {value}", key=key)
    return float(value)


class ControlSchedule:
    """Base of all schedules; subclasses are frozen dataclasses"""

    kind: ClassVar[str] = "abstract"

    def _value(self, t: float) -> float:
        raise NotImplementedError

    def _slope(self, t: float) -> float:
        raise NotImplementedError

    def evaluate(self, t: float) -> float:
        return self._value(_check_time(t))

    def derivative(self, t: float) -> float:
        return self._slope(_check_time(t))

    def breakpoints(self) -> Tuple[float, ...]:
        """Times where the integrand changes quickly, passed to quad"""
        return ()

    def upper_bound(self) -> float:
        raise NotImplementedError

    def weight_rate(self, t: float, beta: float) -> float:
        """G^2 / (beta + G^2); 1 when there is no medium"""
        if beta == 0.0:
            return 1.0
        G = self._value(t)
        return G * G / (beta + G * G)

    def weight_between(self, t0: float, t1: float, beta: float) -> float:
        """Integral of the weight rate over [t0, t1]"""
        if t1 == t0:
            return 0.0
        if beta == 0.0:
            return t1 - t0
        points = [p for p in self.breakpoints() if t0 < p < t1]
        value, _ = integrate.quad(
            self.weight_rate, t0, t1, args=(beta,),
            points=points or None, epsabs=0.0, epsrel=QUAD_RTOL, limit=QUAD_LIMIT,
        )
        return float(value)

    def integral_weight(self, t: float, g: float, alpha_mag: float) -> float:
        """W(t) = integral_0^t G^2 / (g^2|alpha|^2 + G^2) dt'"""
        t = _check_time(t)
        return self.weight_between(0.0, t, (g * alpha_mag) ** 2)


@dataclass(frozen=True)
class ConstantControl(ControlSchedule):
    G0: float

    kind: ClassVar[str] = "constant"

    def __post_init__(self):
        object.__setattr__(self, "G0", _non_negative(self.G0, "control.G0"))

    def _value(self, t: float) -> float:
        return self.G0

    def _slope(self, t: float) -> float:
        return 0.0

    def upper_bound(self) -> float:
        return self.G0

    def weight_between(self, t0: float, t1: float, beta: float) -> float:
        return (t1 - t0) * self.weight_rate(t0, beta)


@dataclass(frozen=True)
class TanhRamp(ControlSchedule):
    """G_initial -> G_final, half-way at t_center, over a scale t_width"""

    G_initial: float
    G_final: float
    t_center: float
    t_width: float

    kind: ClassVar[str] = "tanh_ramp"

    def __post_init__(self):
        object.__setattr__(self, "G_initial", _non_negative(self.G_initial, "control.G_initial"))
        object.__setattr__(self, "G_final", _non_negative(self.G_final, "control.G_final"))
        object.__setattr__(self, "t_width", _positive(self.t_width, "control.t_width"))
        if not math.isfinite(self.t_center):
            raise ConfigValidationError("must be finite", key="control.t_center")
        object.__setattr__(self, "t_center", float(self.t_center))

    def _value(self, t: float) -> float:
        step = 0.5 * (1.0 + math.tanh((t - self.t_center) / self.t_width))
        return self.G_initial + (self.G_final - self.G_initial) * step

    def _slope(self, t: float) -> float:
        sech = 1.0 / math.cosh(min(abs(t - self.t_center) / self.t_width, 350.0))
        return 0.5 * (self.G_final - self.G_initial) * sech * sech / self.t_width

    def breakpoints(self) -> Tuple[float, ...]:
        return (self.t_center,)

    def upper_bound(self) -> float:
        return max(self.G_initial, self.G_final)


@dataclass(frozen=True)
class PiecewiseLinear(ControlSchedule):
    """Linear interpolation through (t, G) knots, constant outside them"""

    knots: Tuple[Tuple[float, float], ...]

    kind: ClassVar[str] = "piecewise_linear"

    def __post_init__(self):
        knots = tuple((float(t), float(G)) for t, G in self.knots)
        if len(knots) < 1:
            raise ConfigValidationError("needs at least one knot", key="control.knots")
        times = [t for t, _ in knots]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ConfigValidationError("knot times must be strictly increasing", key="control.knots")
        for t, G in knots:
            _non_negative(t, "control.knots")
            _non_negative(G, "control.knots")
        object.__setattr__(self, "knots", knots)

    @property
    def _times(self) -> np.ndarray:
        return np.array([t for t, _ in self.knots])

    @property
    def _values(self) -> np.ndarray:
        return np.array([G for _, G in self.knots])

    def _value(self, t: float) -> float:
        return float(np.interp(t, self._times, self._values))

    def _slope(self, t: float) -> float:
        times = self._times
        # right-continuous: at a knot the slope of the segment that starts there
        index = int(np.searchsorted(times, t, side="right")) - 1
        if index < 0 or index >= len(times) - 1:
            return 0.0
        t0, G0 = self.knots[index]
        t1, G1 = self.knots[index + 1]
        return (G1 - G0) / (t1 - t0)

    def breakpoints(self) -> Tuple[float, ...]:
        return tuple(self._times)

    def upper_bound(self) -> float:
        return float(np.max(self._values))


@dataclass(frozen=True)
class StopAndRelease(ControlSchedule):
    """
    G0 switched off around t_off and back on around t_on, tanh edges of
    width t_width:
        G(t) = G0 * [1/2 (1 - tanh((t - t_off)/w)) + 1/2 (1 + tanh((t - t_on)/w))]
    """

    G0: float
    t_off: float
    t_on: float
    t_width: float

    kind: ClassVar[str] = "stop_and_release"

    def __post_init__(self):
        object.__setattr__(self, "G0", _non_negative(self.G0, "control.G0"))
        object.__setattr__(self, "t_off", _non_negative(self.t_off, "control.t_off"))
        object.__setattr__(self, "t_on", _non_negative(self.t_on, "control.t_on"))
        object.__setattr__(self, "t_width", _positive(self.t_width, "control.t_width"))
        if self.t_on <= self.t_off:
            raise ConfigValidationError(
                f"must be later than t_off={self.t_off}, got {self.t_on}", key="control.t_on"
            )

    def _value(self, t: float) -> float:
        off = 0.5 * (1.0 - math.tanh((t - self.t_off) / self.t_width))
        on = 0.5 * (1.0 + math.tanh((t - self.t_on) / self.t_width))
        return self.G0 * (off + on)

    def _slope(self, t: float) -> float:
        def sech2(x: float) -> float:
            s = 1.0 / math.cosh(min(abs(x), 350.0))
            return s * s

        w = self.t_width
        return 0.5 * self.G0 * (sech2((t - self.t_on) / w) - sech2((t - self.t_off) / w)) / w

    def breakpoints(self) -> Tuple[float, ...]:
        return (self.t_off, self.t_on)

    def upper_bound(self) -> float:
        return self.G0

    @property
    def stored_interval(self) -> Tuple[float, float]:
        return self.t_off, self.t_on


def evaluate_control(schedule: ControlSchedule, t: float) -> float:
    """G(t) >= 0; DomainError for t < 0"""
    return schedule.evaluate(t)


def integral_weight(schedule: ControlSchedule, t: float, g: float, alpha_mag: float) -> float:
    """W(t); closed form for a constant schedule, adaptive quadrature otherwise"""
    return schedule.integral_weight(t, g, alpha_mag)


def coupling_factor(schedule: ControlSchedule, t: float, g: float, alpha_mag: float) -> float:
    """kappa(t) = 1 / (1 + G(t)^2 / g^2|alpha|^2)"""
    return coupling_ratio(schedule.evaluate(t), g, alpha_mag)


class IntegralWeightCache:
    """
    Incremental evaluator of W(t) for one run. Forward queries integrate
    only from the last anchor; earlier times fall back to a full integral.
    Not shared between runs.
    """

    MAX_ENTRIES = 8192

    def __init__(self, schedule: ControlSchedule, g: float, alpha_mag: float):
        self.schedule = schedule
        self.beta = (g * alpha_mag) ** 2
        self._anchor_t = 0.0
        self._anchor_w = 0.0
        self._memo: Dict[float, float] = {0.0: 0.0}

    def __call__(self, t: float) -> float:
        t = _check_time(t)
        cached = self._memo.get(t)
        if cached is not None:
            return cached

        if isinstance(self.schedule, ConstantControl):
            value = self.schedule.weight_between(0.0, t, self.beta)
        elif t >= self._anchor_t:
            value = self._anchor_w + self.schedule.weight_between(self._anchor_t, t, self.beta)
            self._anchor_t, self._anchor_w = t, value
        else:
            value = self.schedule.weight_between(0.0, t, self.beta)

        if len(self._memo) >= self.MAX_ENTRIES:
            self._memo.clear()
            self._memo[0.0] = 0.0
        self._memo[t] = value
        return value
