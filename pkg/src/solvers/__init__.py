"""Solvers Package - Condensate Dynamics, Field Propagation and the Analytic Solution"""
from .gpe_dynamics import (
    CondensateState,
    adiabatic_psi0,
    dark_state_psi1,
    initial_condensate,
    initial_state,
    step_first_order,
    step_gpe_zeroth,
)
from .field_propagation import (
    FieldState,
    ReducedEquation,
    advect_step,
    dipole_source,
    run_full_tier,
    run_reduced_tier,
    step_reduced,
)
from .analytic_solution import (
    ComovingFrame,
    EffectiveHamiltonian,
    analytic_field_snapshot,
    comoving_profile,
    effective_hamiltonian,
    effective_mass,
    global_phase,
    group_velocity,
    run_analytic_tier,
    theta,
    u_of_xt,
)

__all__ = [
    "CondensateState",
    "step_gpe_zeroth",
    "initial_condensate",
    "dark_state_psi1",
    "initial_state",
    "step_first_order",
    "adiabatic_psi0",
    "FieldState",
    "ReducedEquation",
    "dipole_source",
    "advect_step",
    "step_reduced",
    "run_reduced_tier",
    "run_full_tier",
    "ComovingFrame",
    "EffectiveHamiltonian",
    "group_velocity",
    "theta",
    "u_of_xt",
    "global_phase",
    "effective_hamiltonian",
    "comoving_profile",
    "analytic_field_snapshot",
    "run_analytic_tier",
    "effective_mass",
]
