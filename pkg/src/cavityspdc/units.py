"""Unit helpers.

Internal canonical variables are angular frequency (rad/s) and Kelvin;
wavelengths are accepted at API boundaries and converted once.
"""

import math

from scipy.constants import c as C_LIGHT  # m/s, exact

TWO_PI = 2.0 * math.pi


def wavelength_to_omega(wavelength_m: float) -> float:
    """Vacuum wavelength (m) to angular frequency (rad/s)."""
    return TWO_PI * C_LIGHT / wavelength_m


def omega_to_wavelength(omega: float) -> float:
    """Angular frequency (rad/s) to vacuum wavelength (m)."""
    return TWO_PI * C_LIGHT / omega


def omega_to_hz(omega: float) -> float:
    return omega / TWO_PI


def hz_to_omega(nu_hz: float) -> float:
    return TWO_PI * nu_hz


def celsius_to_kelvin(t_c: float) -> float:
    return t_c + 273.15


def kelvin_to_celsius(t_k: float) -> float:
    return t_k - 273.15
