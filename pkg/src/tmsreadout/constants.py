"""Physical constants (CODATA, 5 significant digits) and unit helpers."""

from __future__ import annotations

import math

import numpy as np

HBAR = 1.0546e-34  # J s
K_B = 1.3806e-23  # J / K
TWO_PI = 2.0 * math.pi

DEFAULT_LOAD_OHMS = 50.0


def db_to_linear(db):
    """Power ratio from decibels, 10*log10 convention."""
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(np.asarray(x, dtype=float))


def photon_energy(omega):
    """hbar*omega in joules for an angular frequency in rad/s."""
    return HBAR * omega


def photons_to_kelvin(n, omega):
    """Noise temperature equivalent to ``n`` photons at angular frequency ``omega``."""
    return n * HBAR * omega / K_B


def kelvin_to_photons(t, omega):
    return t * K_B / (HBAR * omega)
