"""Diagnostics Package - Pulse Measurements, Fits, Scans and Residual Checks"""
from .measurements import COMPARE_MODES, PulseDiagnostics, compare_fields, measure, measure_series, unwrap_phases
from .validation import (
    LinearFit,
    ResidualReport,
    ScanTable,
    fit_expansion_mass,
    fit_oscillation_frequency,
    fit_velocity,
    reduced_pde_residual,
    transparency_fwhm,
    transparency_scan,
    uniform_alpha_series,
)

__all__ = [
    "COMPARE_MODES",
    "PulseDiagnostics",
    "measure",
    "measure_series",
    "unwrap_phases",
    "compare_fields",
    "LinearFit",
    "fit_velocity",
    "fit_expansion_mass",
    "fit_oscillation_frequency",
    "ScanTable",
    "transparency_scan",
    "transparency_fwhm",
    "ResidualReport",
    "uniform_alpha_series",
    "reduced_pde_residual",
]
