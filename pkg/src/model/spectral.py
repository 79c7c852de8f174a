"""
src/model/spectral.py - Fourier Kernels
Spectral multipliers shared by the solvers. scipy.fft with a fixed worker
count; results do not depend on the count.
"""

import numpy as np
from scipy import fft as sp_fft

from src.config.settings import FFT_WORKERS


def forward(values: np.ndarray) -> np.ndarray:
    return sp_fft.fft(values, workers=FFT_WORKERS)


def inverse(spectrum: np.ndarray) -> np.ndarray:
    return sp_fft.ifft(spectrum, workers=FFT_WORKERS)


def apply_multiplier(values: np.ndarray, multiplier: np.ndarray) -> np.ndarray:
    """ifft(multiplier * fft(values))"""
    return inverse(forward(values) * multiplier)


def derivative(values: np.ndarray, wavenumbers: np.ndarray, order: int = 1) -> np.ndarray:
    """Spectral d^n/dx^n of periodic samples"""
    return apply_multiplier(values, (1j * wavenumbers) ** order)


def derivatives(values: np.ndarray, wavenumbers: np.ndarray):
    """First and second spectral derivatives from one forward transform"""
    spectrum = forward(values)
    ik = 1j * wavenumbers
    return inverse(ik * spectrum), inverse(ik * ik * spectrum)


def shift_multiplier(wavenumbers: np.ndarray, distance: float) -> np.ndarray:
    """Multiplier taking f(x) to f(x - distance)"""
    return np.exp(-1j * wavenumbers * distance)


def shift(values: np.ndarray, wavenumbers: np.ndarray, distance: float) -> np.ndarray:
    """Band-limited translation f(x) -> f(x - distance) on a periodic grid"""
    if distance == 0.0:
        return np.array(values, dtype=np.complex128)
    return apply_multiplier(values, shift_multiplier(wavenumbers, distance))


def kinetic_propagator(wavenumbers: np.ndarray, hbar: float, mass: float, dt: float) -> np.ndarray:
    """exp(-i hbar k^2 dt / 2M); identity when the mass is infinite"""
    if np.isinf(mass):
        return np.ones_like(wavenumbers, dtype=np.complex128)
    return np.exp(-1j * hbar * wavenumbers ** 2 * dt / (2.0 * mass))
