"""Output-chain gain and added-noise calibration from noise power versus amplifier gain.

With the amplifier at gain G the chain sees ``G/2 + (G-1)/2`` vacuum photons
plus its own ``N_sys``; the room-temperature noise power is

    P_N = P_0 * (G - 1/2 + N_sys),   P_0 = G_sys * BW * hbar * omega

with ``BW = 1/T_int``.  The model is linear in ``(P_0, P_0*(N_sys - 1/2))``
so the fit is an ordinary linear least-squares problem.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .constants import HBAR, K_B
from .errors import DomainError, FitError

KINDS = ("power", "photons")


def model_noise_photons(G, N_sys):
    """Noise-equivalent photons at the amplifier output: ``G - 1/2 + N_sys``."""
    G = np.asarray(G, dtype=float)
    if np.any(G < 1):
        raise DomainError("amplifier gain must be >= 1")
    out = G / 2 + (G - 1) / 2 + N_sys
    return out if out.ndim else float(out)


def model_noise_power(G, G_sys, N_sys, omega, T_int):
    return G_sys * HBAR * omega / T_int * model_noise_photons(G, N_sys)


@dataclass(frozen=True)
class NoisePowerPoints:
    """Measured noise versus gain.

    ``kind`` is ``'power'`` (watts at room temperature) or ``'photons'``
    (room-temperature noise-equivalent photons, ``P_N * T_int / (hbar*omega)``).
    """

    G: np.ndarray
    value: np.ndarray
    kind: str = "power"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"kind must be one of {KINDS}, got {self.kind!r}")
        object.__setattr__(self, "G", np.asarray(self.G, dtype=float))
        object.__setattr__(self, "value", np.asarray(self.value, dtype=float))
        if self.G.shape != self.value.shape:
            raise DomainError("gain and value arrays differ in length")
        if np.any(self.G < 1) or np.any(self.value < 0):
            raise DomainError("gains must be >= 1 and values >= 0")


@dataclass(frozen=True)
class CalibrationResult:
    G_sys: float
    N_sys: float
    T_sys: float
    P_0: float
    fit_rms: float
    omega: float
    T_int: float

    @property
    def bandwidth(self) -> float:
        return 1.0 / self.T_int

    def model(self, G, kind: str = "power"):
        n = model_noise_photons(G, self.N_sys)
        if kind == "photons":
            return self.G_sys * n
        return self.P_0 * n


def fit_noise_vs_gain(points: NoisePowerPoints, omega: float, T_int: float) -> CalibrationResult:
    """Least-squares estimate of chain gain and added noise.

    Needs at least three points spanning 3 dB of amplifier gain.  A negative
    added-noise estimate is clamped to zero.
    """
    G, y = points.G, points.value
    if G.size < 3:
        raise FitError("need at least 3 gain points")
    if np.ptp(G) == 0:
        raise FitError("all gains equal; design matrix is rank deficient")
    if 10 * math.log10(G.max() / G.min()) < 3.0:
        raise FitError("gain points must span at least 3 dB")
    A = np.column_stack([G, np.ones_like(G)])
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    if slope <= 0:
        raise FitError(f"fitted noise slope {slope:.3g} is not positive", best=(slope, intercept))
    N_sys = max(intercept / slope + 0.5, 0.0)
    unit = HBAR * omega / T_int
    P_0 = slope if points.kind == "power" else slope * unit
    G_sys = P_0 / unit
    resid = y - slope * (G - 0.5 + N_sys)
    return CalibrationResult(
        G_sys=float(G_sys),
        N_sys=float(N_sys),
        T_sys=float(N_sys * HBAR * omega / K_B),
        P_0=float(P_0),
        fit_rms=float(np.sqrt(np.mean(resid**2))),
        omega=omega,
        T_int=T_int,
    )


def zero_point_temperature(omega: float) -> float:
    return HBAR * omega / (2 * K_B)


def noise_rise(G, N_sys, omega):
    """Output noise with the amplifier on relative to off (temperature form)."""
    G = np.asarray(G, dtype=float)
    if np.any(G < 1):
        raise DomainError("amplifier gain must be >= 1")
    T_Q = zero_point_temperature(omega)
    T_sys = N_sys * HBAR * omega / K_B
    out = (T_sys + G * T_Q + (G - 1) * T_Q) / (T_sys + T_Q)
    return out if out.ndim else float(out)


def noise_rise_photons(G, N_sys):
    G = np.asarray(G, dtype=float)
    out = (N_sys + G - 0.5) / (N_sys + 0.5)
    return out if out.ndim else float(out)


def snr_improvement(G, N_sys, omega):
    """SNR gain of the chain due to the amplifier, ``G / G_N``."""
    G = np.asarray(G, dtype=float)
    if np.any(G < 1):
        raise DomainError("amplifier gain must be >= 1")
    T_Q = zero_point_temperature(omega)
    T_sys = N_sys * HBAR * omega / K_B
    out = (T_sys + T_Q) / (T_sys / G + T_Q * (1 + (G - 1) / G))
    return out if out.ndim else float(out)


def snr_improvement_limit(N_sys, omega):
    """Large-gain saturation ``(T_sys + T_Q) / (2 T_Q)``."""
    T_Q = zero_point_temperature(omega)
    return (N_sys * HBAR * omega / K_B + T_Q) / (2 * T_Q)


def thermal_occupancy(omega: float, T: float) -> float:
    """Symmetrized Bose occupancy ``coth(hbar omega / 2 k_B T) / 2``."""
    return 0.5 / math.tanh(HBAR * omega / (2 * K_B * T))


def read_noise_csv(path) -> NoisePowerPoints:
    """Read ``G_dB,value,kind`` rows; every row must carry the same kind."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in csv.DictReader(ln for ln in fh if not ln.startswith("#"))]
    if not rows:
        raise DomainError(f"{path}: no data rows")
    missing = {"G_dB", "value", "kind"} - set(rows[0])
    if missing:
        raise DomainError(f"{path}: missing columns {sorted(missing)}")
    kinds = {r["kind"].strip() for r in rows}
    if len(kinds) != 1:
        raise DomainError(f"{path}: mixed value kinds {sorted(kinds)}")
    G = 10.0 ** (np.array([float(r["G_dB"]) for r in rows]) / 10.0)
    return NoisePowerPoints(G, np.array([float(r["value"]) for r in rows]), kinds.pop())


def write_noise_csv(path, points: NoisePowerPoints) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["G_dB", "value", "kind"])
        for g, v in zip(points.G, points.value):
            w.writerow([repr(round(10 * math.log10(g), 10)), repr(float(v)), points.kind])
