"""
Model Core Test Suite
Grid, constants, control schedules, potentials, fields and run configuration
"""

import math

import numpy as np
import pytest
from scipy import integrate

from src.model import (
    ComplexField1D,
    ConfigValidationError,
    ConstantControl,
    ConstantPotential,
    DomainError,
    GaussianPulse,
    GridMismatchError,
    HarmonicPotential,
    PhysicalParams,
    PiecewiseLinear,
    PotentialSpec,
    SlabCondensate,
    StabilityBoundError,
    StopAndRelease,
    TabulatedPotential,
    TabulatedPulse,
    TanhRamp,
    amplitude_factor,
    build_grid,
    chemical_phase_rate,
    coupling_factor,
    dump_config,
    evaluate_control,
    integral_weight,
    parse_config_text,
)
from src.model.control import IntegralWeightCache
from src.model.potentials import PotentialLandscape
from src.runner.presets import list_presets, load_preset, preset_text

SCHEDULES = [
    ConstantControl(1.5),
    TanhRamp(1.0, 0.2, 10.0, 2.0),
    PiecewiseLinear(((0.0, 1.0), (5.0, 0.0), (12.0, 2.0))),
    StopAndRelease(1.0, 10.0, 30.0, 1.0),
]

MINIMAL_CONFIG = """\
[grid]
n = 256
length = 256.0

[params]
g = 1.0
alpha = 1.0

[control]
kind = constant
G0 = 1.0

[pulse]
center = -40.0
width = 5.0

[run]
dt = {dt}
t_final = 40.0
tier = reduced
"""


def _line_of(text: str, prefix: str) -> int:
    for number, line in enumerate(text.splitlines(), start=1):
        if line.startswith(prefix):
            return number
    raise AssertionError(prefix)


# ===== GRID =====


def test_build_grid_small():
    grid = build_grid(8, 8.0)
    assert grid.spacing == 1.0
    assert grid.coordinates[0] == -4.0
    assert grid.coordinates[-1] == 3.0


def test_build_grid_spacing():
    assert build_grid(1024, 200.0).spacing == 0.1953125


@pytest.mark.parametrize("n_points, length", [(1000, 10.0), (0, 1.0), (8, 0.0), (8, -1.0)])
def test_build_grid_rejects(n_points, length):
    with pytest.raises(ConfigValidationError):
        build_grid(n_points, length)


def test_grid_arrays_are_read_only():
    grid = build_grid(16, 4.0)
    with pytest.raises(ValueError):
        grid.coordinates[0] = 1.0
    assert grid.nearest_index(grid.coordinates[5] + 0.1 * grid.spacing) == 5


# ===== PARAMETERS =====


def test_symmetric_collision_constants():
    p = PhysicalParams(u12=0.3)
    assert p.u21 == 0.3
    assert PhysicalParams(u20=0.1).u02 == 0.1


def test_asymmetric_collision_constants_rejected():
    with pytest.raises(ConfigValidationError):
        PhysicalParams(u12=0.1, u21=0.2)


def test_infinite_mass_switches_off_kinetics():
    p = PhysicalParams(mass=math.inf)
    assert p.kinetic_coefficient == 0.0
    with pytest.raises(ConfigValidationError):
        PhysicalParams(g=math.inf)


@pytest.mark.parametrize("V2, u2, alpha, expected", [
    (0.0, 0.0, 1.0, 0.0),
    (0.0, 0.5, 1.0, -1.0),
    (1.0, 0.0, 1.0, -1.0),
])
def test_chemical_phase_rate(V2, u2, alpha, expected):
    assert chemical_phase_rate(V2, u2, alpha, 1.0) == pytest.approx(expected, abs=1e-15)


def test_chemical_phase_rate_solves_uniform_condensate():
    # i d/dt (a e^{i mu t}) = (V2 + 2 u2 |a|^2) a e^{i mu t}
    V2, u2, a = 0.3, 0.7, 1.2
    mu = chemical_phase_rate(V2, u2, a, 1.0)
    residual = 1j * (1j * mu) * a - (V2 + 2.0 * u2 * a ** 2) * a
    assert abs(residual) < 1e-12


def test_amplitude_and_coupling_factors():
    assert amplitude_factor(1.0, 1.0, 1.0) == pytest.approx(1.0 / math.sqrt(2.0))
    assert amplitude_factor(0.0, 1.0, 1.0) == 0.0
    assert coupling_factor(ConstantControl(math.sqrt(3.0)), 0.0, 1.0, 1.0) == pytest.approx(0.25)


# ===== CONTROL SCHEDULES =====


def test_evaluate_control_values():
    assert evaluate_control(ConstantControl(2.0), 5.0) == 2.0
    assert evaluate_control(StopAndRelease(1.0, 10.0, 30.0, 1.0), 20.0) < 1e-4
    assert evaluate_control(TanhRamp(1.0, 0.0, 10.0, 1.0), 10.0) == pytest.approx(0.5)


def test_negative_time_rejected():
    with pytest.raises(DomainError):
        evaluate_control(ConstantControl(1.0), -0.1)
    with pytest.raises(DomainError):
        integral_weight(ConstantControl(1.0), -1.0, 1.0, 1.0)


def test_stop_and_release_order():
    with pytest.raises(ConfigValidationError):
        StopAndRelease(1.0, 30.0, 10.0, 1.0)
    assert StopAndRelease(1.0, 10.0, 30.0, 1.0).stored_interval == (10.0, 30.0)


def test_integral_weight_constant():
    assert integral_weight(ConstantControl(1.0), 4.0, 1.0, 1.0) == pytest.approx(2.0, rel=1e-14)
    assert integral_weight(ConstantControl(0.0), 7.0, 1.0, 1.0) == 0.0


def test_integral_weight_matches_dense_trapezoid():
    schedule = TanhRamp(1.0, 0.1, 10.0, 2.0)
    t = np.linspace(0.0, 25.0, 250001)
    G = np.array([schedule.evaluate(s) for s in t])
    reference = integrate.trapezoid(G ** 2 / (1.0 + G ** 2), t)
    assert integral_weight(schedule, 25.0, 1.0, 1.0) == pytest.approx(reference, rel=1e-8)


@pytest.mark.parametrize("schedule", SCHEDULES, ids=lambda s: s.kind)
def test_integral_weight_monotone_and_bounded(schedule):
    times = np.linspace(0.0, 40.0, 41)
    weights = [integral_weight(schedule, t, 1.0, 1.0) for t in times]
    assert np.all(np.diff(weights) >= -1e-12)
    assert np.all(np.array(weights) <= times + 1e-12)


@pytest.mark.parametrize("schedule", SCHEDULES[1:], ids=lambda s: s.kind)
def test_integral_weight_cache_matches_direct(schedule):
    cache = IntegralWeightCache(schedule, 1.0, 1.0)
    for t in (3.0, 11.0, 17.5, 6.0, 35.0):
        assert cache(t) == pytest.approx(schedule.integral_weight(t, 1.0, 1.0), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("schedule", [SCHEDULES[1], SCHEDULES[3]], ids=lambda s: s.kind)
def test_derivative_matches_finite_difference(schedule):
    h = 1e-5
    for t in (2.0, 9.5, 10.0, 29.0, 31.0):
        numeric = (schedule.evaluate(t + h) - schedule.evaluate(t - h)) / (2.0 * h)
        assert schedule.derivative(t) == pytest.approx(numeric, abs=1e-7)


def test_piecewise_linear_slope_is_right_continuous():
    schedule = SCHEDULES[2]
    assert schedule.derivative(2.0) == pytest.approx(-0.2)
    assert schedule.derivative(5.0) == pytest.approx(2.0 / 7.0)
    assert schedule.derivative(20.0) == 0.0
    assert schedule.evaluate(20.0) == 2.0


# ===== POTENTIALS =====


def test_harmonic_potential():
    V = HarmonicPotential(level=1, omega=0.5, center=1.0)
    assert V.evaluate(np.array([3.0]), mass=2.0)[0] == pytest.approx(0.5 * 2.0 * 0.25 * 4.0)
    with pytest.raises(ConfigValidationError):
        V.evaluate(np.array([0.0]), mass=math.inf)


def test_tabulated_potential_checks_length(grid):
    V = TabulatedPotential(level=2, samples=np.zeros(10))
    with pytest.raises(GridMismatchError):
        V.evaluate(grid.coordinates)


def test_only_level_one_can_move():
    with pytest.raises(ConfigValidationError):
        PotentialSpec(level=0, frame="comoving")
    with pytest.raises(ConfigValidationError):
        PotentialSpec(level=3)


def test_comoving_landscape_follows_the_pulse(grid):
    V1 = HarmonicPotential(level=1, frame="comoving", omega=0.1, center=0.0)
    schedule = ConstantControl(1.0)
    landscape = PotentialLandscape(grid, [V1], mass=1.0, c=1.0,
                                   weight=lambda t: schedule.integral_weight(t, 1.0, 1.0))
    expected = V1.evaluate(grid.coordinates - 5.0, 1.0)
    np.testing.assert_allclose(landscape.values(1, 10.0), expected)
    assert landscape.is_moving(1)
    assert not landscape.is_moving(0)


# ===== FIELDS =====


def test_field_is_immutable(grid):
    source = np.ones(grid.n_points)
    field = ComplexField1D(grid, source)
    source[0] = 5.0
    assert field.values[0] == 1.0
    with pytest.raises(ValueError):
        field.values[0] = 2.0


def test_field_length_must_match_grid(grid):
    with pytest.raises(GridMismatchError):
        ComplexField1D(grid, np.ones(grid.n_points - 1))


def test_gaussian_pulse_norm(grid):
    pulse = GaussianPulse(center=0.0, width=3.0).evaluate(grid)
    assert pulse.norm_squared() == pytest.approx(3.0 * math.sqrt(2.0 * math.pi), rel=1e-10)


def test_gaussian_pulse_detuning_ramp(grid):
    pulse = GaussianPulse(center=0.0, width=3.0, detuning=0.5).evaluate(grid, c=2.0)
    j = grid.nearest_index(2.0)
    assert np.angle(pulse.values[j]) == pytest.approx(0.5 * grid.coordinates[j] / 2.0)


def test_spectral_shift_moves_pulse(grid):
    pulse = GaussianPulse(center=-10.0, width=3.0).evaluate(grid)
    moved = pulse.shifted(7.5)
    expected = GaussianPulse(center=-2.5, width=3.0).evaluate(grid)
    np.testing.assert_allclose(moved.values, expected.values, atol=1e-10)


def test_gaussian_pulse_holds_its_center_and_width():
    pulse = GaussianPulse(center=-5.0, width=6.0)
    assert (pulse.center, pulse.width) == (-5.0, 6.0)
    assert pulse.kind == "gaussian"
    assert pulse == GaussianPulse(-5.0, 6.0)


# ===== SIMULATION CONFIG =====


def test_mu_is_derived_from_uniform_condensate(transport_config):
    config = transport_config.with_updates(params=PhysicalParams(mass=math.inf, u2=0.5), snapshot_stride=10)
    assert config.params.mu == pytest.approx(-1.0)
    assert config.mu_consistent


def test_inconsistent_mu_is_kept_and_flagged(transport_config):
    config = transport_config.with_updates(params=PhysicalParams(mass=math.inf, mu=0.2))
    assert config.params.mu == 0.2
    assert not config.mu_consistent


def test_phase_advance_per_snapshot_bound(transport_config):
    with pytest.raises(StabilityBoundError) as exc:
        transport_config.with_updates(params=PhysicalParams(mass=math.inf, u2=0.5), snapshot_stride=50)
    assert exc.value.key == "run.stride"


def test_full_tier_rate_bound(transport_config):
    with pytest.raises(StabilityBoundError) as exc:
        transport_config.with_updates(solver_tier="full", dt=0.2)
    assert exc.value.key == "run.dt"
    assert "0.1" in str(exc.value)


def test_reduced_tier_advection_bound(transport_config):
    with pytest.raises(StabilityBoundError) as exc:
        transport_config.with_updates(dt=5.0)
    assert "k_Nyquist" in str(exc.value)


def test_pulse_must_sit_inside_grid(transport_config):
    with pytest.raises(ConfigValidationError) as exc:
        transport_config.with_updates(pulse=GaussianPulse(center=-110.0, width=5.0))
    assert exc.value.key == "pulse.center"
    with pytest.raises(ConfigValidationError) as exc:
        transport_config.with_updates(pulse=GaussianPulse(center=0.0, width=2.0))
    assert exc.value.key == "pulse.width"


def test_tabulated_pulse_skips_the_width_checks(transport_config):
    samples = GaussianPulse(center=-40.0, width=5.0).evaluate(transport_config.grid).values
    config = transport_config.with_updates(pulse=TabulatedPulse(samples))
    assert not hasattr(config.pulse, "width")
    np.testing.assert_allclose(config.pulse_field().values, samples)


def test_whole_number_of_steps(transport_config):
    with pytest.raises(ConfigValidationError):
        transport_config.with_updates(t_final=40.05)


def test_initial_field_carries_amplitude_factor(transport_config):
    initial = transport_config.initial_field()
    pulse = transport_config.pulse_field()
    np.testing.assert_allclose(initial.values, pulse.values / math.sqrt(2.0))
    slab = transport_config.with_updates(condensate=SlabCondensate(center=0.0, length=20.0, edge=2.0),
                                         solver_tier="full", dt=0.05)
    np.testing.assert_allclose(slab.initial_field().values, pulse.values)


def test_snapshot_steps_include_last(transport_config):
    config = transport_config.with_updates(snapshot_stride=150)
    assert config.snapshot_steps() == (0, 150, 300, 400)


# ===== CONFIG FILES =====


def test_parse_minimal_config():
    config = parse_config_text(MINIMAL_CONFIG.format(dt=0.1), source="minimal.ini")
    assert config.grid.n_points == 256
    assert config.n_steps == 400
    assert config.potential(1).frame == "comoving"
    assert config.params.mu == 0.0


def test_stability_error_points_at_dt_line():
    text = MINIMAL_CONFIG.format(dt=5.0)
    with pytest.raises(StabilityBoundError) as exc:
        parse_config_text(text, source="bad.ini")
    assert exc.value.line == _line_of(text, "dt")
    assert str(exc.value).startswith(f"bad.ini:{exc.value.line}: run.dt:")


def test_unknown_key_points_at_its_line():
    text = MINIMAL_CONFIG.format(dt=0.1).replace("alpha = 1.0", "alpha = 1.0\nalfa = 2.0")
    with pytest.raises(ConfigValidationError) as exc:
        parse_config_text(text)
    assert exc.value.line == _line_of(text, "alfa")
    assert exc.value.key == "params.alfa"


def test_bad_grid_points_at_grid_line():
    text = MINIMAL_CONFIG.format(dt=0.1).replace("n = 256", "n = 1000")
    with pytest.raises(ConfigValidationError) as exc:
        parse_config_text(text)
    assert exc.value.line == _line_of(text, "n =")


def test_unknown_section_rejected():
    with pytest.raises(ConfigValidationError):
        parse_config_text(MINIMAL_CONFIG.format(dt=0.1) + "\n[extra]\nx = 1\n")


def test_presets_are_shipped():
    assert list_presets() == ["free_expansion", "harmonic_steering", "stop_and_release", "transparency_scan",
                              "transport"]


@pytest.mark.parametrize("name", ["free_expansion", "harmonic_steering", "stop_and_release",
                                  "transparency_scan", "transport"])
def test_config_echo_round_trip(name):
    config = load_preset(name)
    echo = dump_config(config)
    again = parse_config_text(echo, source=f"{name}-echo.ini")
    assert dump_config(again) == echo
    assert again.params == config.params
    assert again.control == config.control
    assert again.mu_consistent
    assert "[run]" in preset_text(name)


def test_constant_potential_round_trip():
    text = MINIMAL_CONFIG.format(dt=0.1) + "\n[potential2]\nkind = constant\nvalue = 0.25\n"
    config = parse_config_text(text)
    assert isinstance(config.potential(2), ConstantPotential)
    assert config.params.mu == pytest.approx(-0.25)
    assert dump_config(parse_config_text(dump_config(config))) == dump_config(config)
