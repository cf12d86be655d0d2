"""Amplifier backaction on the qubit: excess dephasing from leaked thermal photons.

Coherence times give a pure-dephasing rate, which the dispersive
photon-shot-noise rate converts into a resonator thermal population.  Its
growth with amplifier gain measures the isolation between amplifier and
readout resonator.  All rates are angular (s^-1).
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .constants import TWO_PI
from .errors import DomainError, FitError

SMALL_NBAR_LIMIT = 0.1


class ApproximationWarning(UserWarning):
    """A small-parameter approximation is being used outside its comfort zone."""


def dephasing_rate(T1, T2E):
    """``1/T2E - 1/(2 T1)``; records with ``T2E > 2 T1`` are unphysical."""
    T1, T2E = np.asarray(T1, dtype=float), np.asarray(T2E, dtype=float)
    if np.any(T1 <= 0) or np.any(T2E <= 0):
        raise DomainError("coherence times must be > 0")
    if np.any(T2E > 2 * T1 * (1 + 1e-12)):
        raise DomainError("T2E exceeds 2*T1")
    out = np.clip(1 / T2E - 1 / (2 * T1), 0.0, None)
    return out if out.ndim else float(out)


def t2e_from_dephasing(T1, gamma_phi):
    """Echo time implied by ``T1`` and a pure-dephasing rate."""
    return 1.0 / (np.asarray(gamma_phi, dtype=float) + 1.0 / (2 * np.asarray(T1, dtype=float)))


def gamma_c(kappa: float, chi: float) -> float:
    """Dephasing per thermal photon, ``kappa chi^2 / (kappa^2 + chi^2)``."""
    if kappa <= 0 or chi <= 0:
        raise DomainError("kappa and chi must be > 0")
    return kappa * chi**2 / (kappa**2 + chi**2)


def gamma_c_from_hz(kappa_hz: float, chi_hz: float) -> float:
    """Same as :func:`gamma_c` with ``kappa/2pi`` and ``chi/2pi`` given in Hz."""
    return gamma_c(TWO_PI * kappa_hz, TWO_PI * chi_hz)


def nth_from_dephasing(gamma_phi, gamma_c_value: float):
    if gamma_c_value <= 0:
        raise DomainError("Gamma_c must be > 0")
    n = np.asarray(gamma_phi, dtype=float) / gamma_c_value
    if np.any(n > SMALL_NBAR_LIMIT):
        warnings.warn(
            f"thermal population {float(np.max(n)):.3g} exceeds {SMALL_NBAR_LIMIT}; "
            "small-population relation is strained",
            ApproximationWarning,
            stacklevel=2,
        )
    return n if n.ndim else float(n)


def nth_model(G, L, nth_a, nth_b, alpha_bar: float = 1.0):
    """Resonator thermal photons versus gain with finite isolation ``L``."""
    if L * alpha_bar > 0.1:
        warnings.warn(f"L*alpha_bar = {L * alpha_bar:.3g} is not small", ApproximationWarning, stacklevel=2)
    G = np.asarray(G, dtype=float)
    out = L * (alpha_bar * nth_a + nth_b + 1) * G - L * (nth_b + 1) + nth_a
    return out if out.ndim else float(out)


def nth_model_small(G, L, nth_a):
    """Small-population limit, affine in gain: ``L G + (nth_a - L)``."""
    out = L * np.asarray(G, dtype=float) + (nth_a - L)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class BackactionFit:
    L: float
    nth_a: float
    slope: float
    intercept: float
    rms: float

    @property
    def L_dB(self) -> float:
        return 10.0 * math.log10(self.L)


def fit_isolation(G, nth) -> BackactionFit:
    """Straight-line fit of thermal population against linear gain."""
    G, nth = np.asarray(G, dtype=float), np.asarray(nth, dtype=float)
    if G.shape != nth.shape or G.size < 2:
        raise FitError("need at least two (gain, nbar_th) points")
    if np.unique(G).size < 2:
        raise FitError("need at least two distinct gains")
    A = np.column_stack([G, np.ones_like(G)])
    (slope, intercept), *_ = np.linalg.lstsq(A, nth, rcond=None)
    if slope <= 0:
        raise FitError(f"negative slope {slope:.3g}: unphysical isolation", best=(slope, intercept))
    if slope > 1:
        raise FitError(f"slope {slope:.3g} > 1: isolation cannot exceed unity", best=(slope, intercept))
    rms = float(np.sqrt(np.mean((nth - (slope * G + intercept)) ** 2)))
    return BackactionFit(float(slope), float(intercept + slope), float(slope), float(intercept), rms)


@dataclass(frozen=True)
class CoherenceTable:
    G: np.ndarray
    T1: np.ndarray | None = None
    T2E: np.ndarray | None = None
    nth: np.ndarray | None = None

    def thermal_population(self, gamma_c_value: float) -> np.ndarray:
        if self.nth is not None:
            return self.nth
        return np.asarray(nth_from_dephasing(dephasing_rate(self.T1, self.T2E), gamma_c_value))


def read_coherence_csv(path) -> CoherenceTable:
    """Rows of ``G_dB,T1_us,T2E_us`` or ``G_dB,nbar_th``."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.DictReader(ln for ln in fh if not ln.startswith("#")))
    if not rows:
        raise DomainError(f"{path}: no data rows")
    cols = set(rows[0])
    G = 10.0 ** (np.array([float(r["G_dB"]) for r in rows]) / 10.0) if "G_dB" in cols else None
    if G is None:
        raise DomainError(f"{path}: missing column G_dB")
    if {"T1_us", "T2E_us"} <= cols:
        return CoherenceTable(
            G,
            T1=np.array([float(r["T1_us"]) for r in rows]) * 1e-6,
            T2E=np.array([float(r["T2E_us"]) for r in rows]) * 1e-6,
        )
    if "nbar_th" in cols:
        return CoherenceTable(G, nth=np.array([float(r["nbar_th"]) for r in rows]))
    raise DomainError(f"{path}: need columns T1_us,T2E_us or nbar_th")
