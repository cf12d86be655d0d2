"""Closed-form power SNR and assignment fidelity for the three readout modes.

All functions broadcast over numpy arrays.  ``I2_in`` is the squared
qubit-carrying input quadrature mean, ``sin(theta/2)**2 * nbar_in``.

Fidelity uses the equal-sigma relation ``F = (1 + erf(sqrt(R/8))) / 2``,
evaluated through ``erfc`` so that ``1 - F`` keeps full relative precision
at high fidelity.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .errors import DomainError

LANDSCAPE_COLUMNS = (
    "G_dB", "N_sys", "R_a", "R_ab_max", "R_ab_min",
    "F_a", "F_ab_max", "F_ab_min", "ratio", "deltaF",
)


def _r_from_gain(G):
    G = np.asarray(G, dtype=float)
    if np.any(G < 1):
        raise DomainError("power gain must be >= 1")
    return np.log(np.sqrt(G) + np.sqrt(G - 1.0))


def R_a(r, N_sys_a, I2_in):
    """Phase-preserving readout of mode a alone."""
    e_up, e_down = np.exp(2 * np.asarray(r, dtype=float)), np.exp(-2 * np.asarray(r, dtype=float))
    return (e_up + e_down + 2) / ((e_up + e_down) / 8 + np.asarray(N_sys_a) / 2) * I2_in


def R_a_gain(G, N_sys_a, I2_in):
    """Same as :func:`R_a` written in terms of the power gain."""
    G = np.asarray(G, dtype=float)
    return 4 * G / ((2 * G - 1) / 4 + np.asarray(N_sys_a) / 2) * I2_in


def R_b(r, N_sys_b, I2_in):
    """Idler mode b alone; carries the signal only once the gain exceeds one."""
    e_up, e_down = np.exp(2 * np.asarray(r, dtype=float)), np.exp(-2 * np.asarray(r, dtype=float))
    return (e_up + e_down - 2) / ((e_up + e_down) / 8 + np.asarray(N_sys_b) / 2) * I2_in


def R_ab_max(r, N_sys_a, N_sys_b, I2_in):
    """Combined mode with the I quadrature antisqueezed."""
    e_up = np.exp(2 * np.asarray(r, dtype=float))
    N_e = np.asarray(N_sys_a) + np.asarray(N_sys_b)
    return 2 * e_up / (e_up / 4 + N_e / 4) * I2_in


def R_ab_min(r, N_sys_a, N_sys_b, I2_in):
    """Combined mode with the I quadrature squeezed."""
    e_down = np.exp(-2 * np.asarray(r, dtype=float))
    N_e = np.asarray(N_sys_a) + np.asarray(N_sys_b)
    return 2 * e_down / (e_down / 4 + N_e / 4) * I2_in


def R_ab_equal_noise(r, N_sys, I2_in):
    """Antisqueezed combined mode when both chains add ``N_sys``."""
    e_up = np.exp(2 * np.asarray(r, dtype=float))
    return 2 * e_up / (e_up / 4 + np.asarray(N_sys) / 2) * I2_in


def _check_R(R):
    R = np.asarray(R, dtype=float)
    if np.any(R < 0) or np.any(np.isnan(R)):
        raise DomainError("power SNR must be >= 0")
    return R


def fidelity_from_R(R):
    """Assignment fidelity of two equal-width Gaussians with power SNR ``R``."""
    R = _check_R(R)
    F = 1.0 - 0.5 * erfc(np.sqrt(R / 8))
    return F if F.ndim else float(F)


def infidelity_from_R(R):
    """``1 - F``, accurate when F is close to one."""
    R = _check_R(R)
    e = 0.5 * erfc(np.sqrt(R / 8))
    return e if e.ndim else float(e)


@dataclass(frozen=True)
class MetricPoint:
    G: float
    N_sys_a: float
    N_sys_b: float
    I2_in: float
    R_a: float
    R_ab_max: float
    R_ab_min: float
    F_a: float
    F_ab_max: float
    F_ab_min: float

    @property
    def N_sys_e(self) -> float:
        return self.N_sys_a + self.N_sys_b

    @property
    def ratio(self) -> float:
        return self.R_ab_max / self.R_a

    @property
    def delta_F(self) -> float:
        return self.F_ab_max - self.F_a


def metric_point(G: float, N_sys_a: float, N_sys_b: float, I2_in: float) -> MetricPoint:
    r = float(_r_from_gain(G))
    ra = float(R_a(r, N_sys_a, I2_in))
    rmax = float(R_ab_max(r, N_sys_a, N_sys_b, I2_in))
    rmin = float(R_ab_min(r, N_sys_a, N_sys_b, I2_in))
    return MetricPoint(
        G, N_sys_a, N_sys_b, I2_in, ra, rmax, rmin,
        fidelity_from_R(ra), fidelity_from_R(rmax), fidelity_from_R(rmin),
    )


@dataclass
class Landscape:
    """R and F maps over a (gain, added noise) grid with equal chain noise.

    Arrays are shaped ``(len(G_dB), len(N_sys))``.
    """

    G_dB: np.ndarray
    N_sys: np.ndarray
    I2_in: float
    R_a: np.ndarray
    R_ab_max: np.ndarray
    R_ab_min: np.ndarray
    F_a: np.ndarray
    F_ab_max: np.ndarray
    F_ab_min: np.ndarray
    delta_F: np.ndarray

    @property
    def ratio(self) -> np.ndarray:
        return self.R_ab_max / self.R_a

    def cross_section(self, G_dB: float) -> dict[str, np.ndarray]:
        """Curves versus N_sys at the grid gain nearest ``G_dB``."""
        i = int(np.argmin(np.abs(self.G_dB - G_dB)))
        return {
            "G_dB": self.G_dB[i],
            "N_sys": self.N_sys,
            "F_a": self.F_a[i],
            "F_ab": self.F_ab_max[i],
            "deltaF": self.delta_F[i],
            "ratio": self.ratio[i],
        }

    def rows(self):
        """Rows in :data:`LANDSCAPE_COLUMNS` order, gain-major."""
        ratio = self.ratio
        for i, g in enumerate(self.G_dB):
            for j, n in enumerate(self.N_sys):
                yield (
                    float(g), float(n), self.R_a[i, j], self.R_ab_max[i, j], self.R_ab_min[i, j],
                    self.F_a[i, j], self.F_ab_max[i, j], self.F_ab_min[i, j],
                    ratio[i, j], self.delta_F[i, j],
                )


def default_gain_grid_db() -> np.ndarray:
    return np.round(np.arange(0.0, 24.0 + 1e-9, 0.25), 10)


def default_noise_grid() -> np.ndarray:
    return np.round(np.arange(0.5, 50.0 + 1e-9, 0.5), 10)


def _landscape_row(G_dB: float, N_sys: np.ndarray, I2_in: float):
    r = float(_r_from_gain(10.0 ** (G_dB / 10.0)))
    ra = R_a(r, N_sys, I2_in)
    rmax = R_ab_max(r, N_sys, N_sys, I2_in)
    rmin = R_ab_min(r, N_sys, N_sys, I2_in)
    ea, emax, emin = infidelity_from_R(ra), infidelity_from_R(rmax), infidelity_from_R(rmin)
    return ra, rmax, rmin, 1 - ea, 1 - emax, 1 - emin, ea - emax


def landscape(G_dB=None, N_sys=None, I2_in: float = 5.0, jobs: int = 1) -> Landscape:
    """Evaluate all metrics on a gain (dB) x added-noise grid.

    Rows (one per gain) may be evaluated on a thread pool; results are
    assembled in grid order regardless of completion order.
    """
    G_dB = default_gain_grid_db() if G_dB is None else np.atleast_1d(np.asarray(G_dB, dtype=float))
    N_sys = default_noise_grid() if N_sys is None else np.atleast_1d(np.asarray(N_sys, dtype=float))
    if G_dB.size == 0 or N_sys.size == 0:
        raise DomainError("landscape grids must be nonempty")
    if np.any(G_dB < 0):
        raise DomainError("gain grid must be >= 0 dB")
    if np.any(N_sys < 0):
        raise DomainError("noise grid must be >= 0")
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda g: _landscape_row(g, N_sys, I2_in), G_dB))
    else:
        rows = [_landscape_row(g, N_sys, I2_in) for g in G_dB]
    cols = [np.vstack(c) for c in zip(*rows)]
    return Landscape(G_dB, N_sys, I2_in, *cols)
