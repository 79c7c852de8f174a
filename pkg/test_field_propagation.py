"""
Field Propagation Test Suite
Dipole source, Maxwell transport, the reduced envelope equation and run loops
"""

import math

import numpy as np
import pytest

from src.diagnostics.measurements import compare_fields
from src.model import (
    ComplexField1D,
    ConstantControl,
    GaussianPulse,
    NumericalFailureError,
    PhysicalParams,
    SimulationConfig,
    SlabCondensate,
    StoppedLightError,
    UnsupportedOperationError,
    build_grid,
)
from src.model import spectral
from src.model.potentials import as_landscape
from src.solvers.analytic_solution import analytic_field_snapshot
from src.solvers.field_propagation import (
    FieldState,
    ReducedEquation,
    advect_step,
    dipole_source,
    run_full_tier,
    run_reduced_tier,
    step_reduced,
)
from src.solvers.gpe_dynamics import adiabatic_psi0, dark_state_psi1


def _rk4_config(dt: float) -> SimulationConfig:
    return SimulationConfig(
        grid=build_grid(256, 128.0),
        params=PhysicalParams(mass=1.0, g=1.0, alpha_mag=1.0, c=1.0, k_F=0.5),
        control=ConstantControl(1.0),
        pulse=GaussianPulse(center=-20.0, width=4.0),
        dt=dt,
        t_final=20.0,
        snapshot_stride=int(round(20.0 / dt)),
        solver_tier="reduced",
    )


# ===== FULL-TIER BUILDING BLOCKS =====


def test_dipole_source_is_absorptive():
    grid = build_grid(16, 4.0)
    one = ComplexField1D.uniform(grid, 1.0)
    source = dipole_source(one, one, 0.0, 1.0)
    np.testing.assert_allclose(source.values, -1j)


def test_dipole_source_removes_probe_carrier():
    grid = build_grid(16, 4.0)
    one = ComplexField1D.uniform(grid, 1.0)
    psi0 = one.with_values(np.exp(0.5j * grid.coordinates))
    np.testing.assert_allclose(dipole_source(one, psi0, 0.5, 2.0).values, -2j, atol=1e-14)


def test_advect_step_translates_exactly(grid):
    pulse = GaussianPulse(center=-10.0, width=3.0).evaluate(grid)
    moved = advect_step(FieldState(pulse, 0.0), ComplexField1D.zeros(grid), 2.5, 2.0)
    expected = GaussianPulse(center=-5.0, width=3.0).evaluate(grid)
    np.testing.assert_allclose(moved.envelope.values, expected.values, atol=1e-10)
    assert moved.time == 2.5


def test_advect_step_integrates_uniform_source(grid):
    source = ComplexField1D.uniform(grid, 0.5 - 0.25j)
    field = advect_step(FieldState(ComplexField1D.zeros(grid)), source, 0.1, 1.0)
    np.testing.assert_allclose(field.envelope.values, 0.1 * (0.5 - 0.25j), atol=1e-15)


# ===== REDUCED TIER =====


def test_reduced_step_transports_at_group_velocity():
    grid = build_grid(256, 256.0)
    params = PhysicalParams(mass=math.inf, mu=0.0)
    schedule = ConstantControl(1.0)
    field = FieldState(GaussianPulse(center=-20.0, width=5.0).evaluate(grid))
    for n in range(200):
        field = step_reduced(field, 0.1 * n, 0.1, params, schedule)
    expected = GaussianPulse(center=-10.0, width=5.0).evaluate(grid)
    assert compare_fields(field.envelope, expected, "relative_L2") < 1e-6


def test_reduced_step_refuses_stopped_light(grid):
    field = FieldState(GaussianPulse(center=0.0, width=5.0).evaluate(grid))
    with pytest.raises(StoppedLightError):
        step_reduced(field, 0.0, 0.1, PhysicalParams(mu=0.0), ConstantControl(0.0))


def test_reduced_step_accepts_explicit_condensate():
    grid = build_grid(256, 256.0)
    params = PhysicalParams(mass=math.inf, mu=0.0, alpha_mag=1.0)
    field = FieldState(GaussianPulse(center=0.0, width=5.0).evaluate(grid))
    # g|alpha| = sqrt(3) G: v_g = c / 4
    for n in range(100):
        field = step_reduced(field, 0.1 * n, 0.1, params, ConstantControl(1.0), alpha_mag=math.sqrt(3.0))
    expected = GaussianPulse(center=2.5, width=5.0).evaluate(grid)
    assert compare_fields(field.envelope, expected, "relative_L2") < 1e-6


@pytest.mark.parametrize("k_G,k_F", [(0.5, 0.0), (0.0, 0.5), (0.3, -0.2)])
def test_reduced_equation_matches_the_eliminated_atoms(k_G, k_F):
    grid = build_grid(256, 128.0)
    params = PhysicalParams(mass=1.0, g=1.0, alpha_mag=1.0, c=1.0, k_G=k_G, k_F=k_F, mu=0.0)
    G = 1.0
    equation = ReducedEquation(params, ConstantControl(G), as_landscape(None, grid, params.mass, params.c), 0.0)
    envelope = GaussianPulse(center=0.0, width=6.0).evaluate(grid)
    E_t = envelope.with_values(equation(envelope.values, 0.0))

    # dark state -> adiabatic excited state -> dipole source -> Maxwell transport
    psi2 = ComplexField1D.uniform(grid, 1.0)
    h = 1e-3
    before = dark_state_psi1(envelope.with_values(envelope.values - h * E_t.values), psi2, G, params)
    after = dark_state_psi1(envelope.with_values(envelope.values + h * E_t.values), psi2, G, params)
    psi1 = dark_state_psi1(envelope, psi2, G, params)
    psi0 = adiabatic_psi0(before, after, h, psi1, psi2, G, params)
    source = dipole_source(psi2, psi0, params.k_F, params.g)
    E_x = spectral.derivative(envelope.values, grid.wavenumbers, 1)
    transported = envelope.with_values(-params.c * E_x + source.values)
    assert compare_fields(transported, E_t, "relative_L2") < 1e-8


def test_reduced_tier_needs_uniform_medium(transport_config):
    config = transport_config.with_updates(condensate=SlabCondensate(center=0.0, length=20.0, edge=2.0))
    with pytest.raises(UnsupportedOperationError):
        run_reduced_tier(config)


def test_run_reduced_tier_snapshots(transport_config):
    series = run_reduced_tier(transport_config)
    assert series.tier == "reduced"
    assert series.steps == 400
    np.testing.assert_allclose(series.times(), transport_config.snapshot_times())
    assert series.snapshots[0].control == 1.0
    assert series.final.envelope.norm_squared() == pytest.approx(series[0].envelope.norm_squared(), rel=1e-9)


def test_rk4_is_fourth_order():
    errors = []
    for dt in (0.1, 0.05):
        config = _rk4_config(dt)
        reduced = run_reduced_tier(config).final.envelope
        exact = analytic_field_snapshot(config.with_updates(solver_tier="analytic"), 20.0)
        errors.append(compare_fields(reduced, exact, "relative_L2"))
    assert 12.0 <= errors[0] / errors[1] <= 20.0


# ===== FULL TIER =====


def _vacuum_config(**changes) -> SimulationConfig:
    base = dict(
        grid=build_grid(128, 128.0),
        params=PhysicalParams(mass=math.inf, g=0.0, alpha_mag=1.0, c=1.0),
        control=ConstantControl(1.0),
        pulse=GaussianPulse(center=-30.0, width=4.0),
        dt=0.05,
        t_final=10.0,
        snapshot_stride=100,
        solver_tier="full",
        detection_plane=0.0,
    )
    base.update(changes)
    return SimulationConfig(**base)


def test_full_tier_without_coupling_is_free_flight():
    config = _vacuum_config()
    series = run_full_tier(config)
    expected = config.initial_field().shifted(config.params.c * config.t_final)
    assert compare_fields(series.final.envelope, expected, "relative_L2") < 1e-9
    assert set(series.final.atoms) == {"psi2_0", "psi0_1", "psi1_1"}
    assert len(series.detection_flux) == config.n_steps + 1


def test_detection_plane_counts_the_whole_pulse():
    config = _vacuum_config(t_final=60.0, snapshot_stride=1200)
    series = run_full_tier(config)
    assert series.transmitted_fraction() == pytest.approx(1.0, rel=1e-6)


def test_full_tier_reports_non_finite_fields(monkeypatch):
    import src.solvers.field_propagation as field_propagation

    def broken(field, source, dt, c):
        return FieldState(field.envelope.with_values(np.full(field.envelope.grid.n_points, np.nan)), field.time + dt)

    monkeypatch.setattr(field_propagation, "advect_step", broken)
    with pytest.raises(NumericalFailureError) as exc:
        run_full_tier(_vacuum_config())
    assert exc.value.tag == "envelope"
    assert exc.value.step == 100


@pytest.mark.slow
def test_slab_absorbs_an_off_resonant_probe():
    config = SimulationConfig(
        grid=build_grid(256, 256.0),
        params=PhysicalParams(mass=math.inf, g=1.0, gamma=1.0, alpha_mag=1.0, c=1.0),
        control=ConstantControl(1.0),
        pulse=GaussianPulse(center=-78.0, width=10.0, detuning=0.6),
        condensate=SlabCondensate(center=-10.0, length=20.0, edge=2.0),
        dt=0.05,
        t_final=150.0,
        snapshot_stride=1000,
        solver_tier="full",
        detection_plane=10.0,
    )
    assert run_full_tier(config).transmitted_fraction() < 0.5


def test_free_advection_keeps_the_norm(grid):
    field = FieldState(GaussianPulse(center=0.0, width=3.0, detuning=0.4).evaluate(grid))
    start = field.envelope.norm_squared()
    zero = ComplexField1D.zeros(grid)
    for _ in range(1000):
        field = advect_step(field, zero, 0.37, 1.0)
    assert abs(field.envelope.norm_squared() / start - 1.0) < 1e-12


def test_source_accumulates_in_place_without_transport(grid):
    source = GaussianPulse(center=5.0, width=2.0).evaluate(grid)
    field = FieldState(ComplexField1D.zeros(grid))
    for _ in range(10):
        field = advect_step(field, source, 0.1, 0.0)
    np.testing.assert_allclose(field.envelope.values, source.values, atol=1e-12)


def test_full_tier_without_a_pulse_stays_dark():
    config = _vacuum_config(params=PhysicalParams(mass=1.0, g=1.0, gamma=1.0, alpha_mag=1.0),
                            pulse=GaussianPulse(center=-30.0, width=4.0, amplitude=0.0), detection_plane=None)
    final = run_full_tier(config).final
    assert final.envelope.max_abs() == 0.0
    assert final.atoms["psi0_1"].max_abs() == 0.0
    assert final.atoms["psi1_1"].max_abs() == 0.0


@pytest.mark.parametrize("tier", ["full", "reduced"])
def test_first_order_fields_ignore_self_collisions_of_the_coherences(tier):
    def run(**collisions):
        params = PhysicalParams(mass=1.0, g=1.0, gamma=1.0, alpha_mag=1.0, u2=0.1, u12=0.05, **collisions)
        config = _vacuum_config(params=params, detection_plane=None, solver_tier=tier)
        return (run_full_tier if tier == "full" else run_reduced_tier)(config).final

    plain, colliding = run(), run(u0=3.0, u1=5.0)
    np.testing.assert_array_equal(colliding.envelope.values, plain.envelope.values)
    for name, field in plain.atoms.items():
        np.testing.assert_array_equal(colliding.atoms[name].values, field.values)
