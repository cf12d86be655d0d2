"""Two-mode squeeze algebra on quadrature means and covariances.

Quadratures follow the ``I = (a + a^dagger)/2`` convention, so a vacuum
quadrature has variance 1/4.  Vectors are ordered ``(I_a, Q_a, I_b, Q_b)``.

The amplifier acts as

    a_out = cosh(r) a_in + exp(i phi_p) sinh(r) b_in^dagger
    b_out = cosh(r) b_in + exp(i phi_p) sinh(r) a_in^dagger

which is a real 4x4 symplectic map on the quadrature vector.  Means and
covariances are both propagated through this one map, so the shot engine
sees a physically consistent Gaussian state for any pump phase.

At ``phi_p = 0`` the combination ``I_a - I_b`` is squeezed.  At
``phi_p = pi`` the idler means pick up the signs
``I_b = -sqrt(G-1) I_in``, ``Q_b = +sqrt(G-1) Q_in`` and the I-carrying
combination ``I_a - I_b`` is antisqueezed instead.  This is the frame the
readout fixtures use (see :data:`READOUT_PUMP_PHASE`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError

VACUUM_VARIANCE = 0.25

#: Pump phase whose idler-mean signs place the I antisqueezing point at a
#: relative rotation of pi, as used for dispersive readout.
READOUT_PUMP_PHASE = math.pi


class QuadMeans(NamedTuple):
    I_a: float
    Q_a: float
    I_b: float
    Q_b: float

    def flip_I(self) -> "QuadMeans":
        """Mirror about the Q axis (ground <-> excited state)."""
        return QuadMeans(-self.I_a, self.Q_a, -self.I_b, self.Q_b)


class CombinedQuad(NamedTuple):
    I_ab: np.ndarray | float
    Q_ab: np.ndarray | float
    phi: float


@dataclass(frozen=True)
class SqueezeParams:
    """Squeezing parameter ``r >= 0`` and pump phase ``phi_p`` (radians)."""

    r: float
    phi_p: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.r) or self.r < 0:
            raise DomainError(f"squeezing parameter must be >= 0, got {self.r}")

    @property
    def G(self) -> float:
        return math.cosh(self.r) ** 2

    @property
    def gain_db(self) -> float:
        return 10.0 * math.log10(self.G)

    @classmethod
    def from_gain(cls, G: float, phi_p: float = 0.0) -> "SqueezeParams":
        return cls(gain_to_r(G), phi_p)

    @classmethod
    def from_gain_db(cls, gain_db: float, phi_p: float = 0.0) -> "SqueezeParams":
        return cls(gain_to_r(10.0 ** (gain_db / 10.0)), phi_p)


def gain_to_r(G: float) -> float:
    """Invert ``G = cosh(r)**2``.

    Uses ``r = ln(sqrt(G) + sqrt(G-1))`` which stays accurate near G = 1,
    unlike ``acosh(sqrt(G))``.
    """
    if not G >= 1.0:
        raise DomainError(f"power gain must be >= 1, got {G}")
    return math.log(math.sqrt(G) + math.sqrt(G - 1.0))


def symplectic_matrix(params: SqueezeParams) -> np.ndarray:
    """Real quadrature map of the two-mode squeezer, rows/cols ``(I_a, Q_a, I_b, Q_b)``."""
    ch, sh = math.cosh(params.r), math.sinh(params.r)
    c, s = math.cos(params.phi_p), math.sin(params.phi_p)
    return np.array(
        [
            [ch, 0.0, sh * c, sh * s],
            [0.0, ch, sh * s, -sh * c],
            [sh * c, sh * s, ch, 0.0],
            [sh * s, -sh * c, 0.0, ch],
        ]
    )


def propagate_means(means_in: QuadMeans, params: SqueezeParams) -> QuadMeans:
    """Output quadrature means for input means ``(I_in, Q_in, I_b_in, Q_b_in)``.

    With a vacuum idler and ``phi_p = pi`` this gives
    ``I_a = sqrt(G) I_in``, ``I_b = -sqrt(G-1) I_in``, ``Q_b = sqrt(G-1) Q_in``.
    """
    out = symplectic_matrix(params) @ np.asarray(means_in, dtype=float)
    return QuadMeans(*(float(v) for v in out))


def output_covariance(params: SqueezeParams, N_sys_a: float = 0.0, N_sys_b: float = 0.0) -> np.ndarray:
    """Covariance at the amplifier output for vacuum-noise inputs plus chain noise.

    Chain noise of mode k adds ``N_sys_k / 2`` to both quadrature variances of
    that mode only.  At ``phi_p = 0``: diagonal ``cosh(2r)/4 + N/2``,
    ``Cov(I_a, I_b) = sinh(2r)/4`` and ``Cov(Q_a, Q_b) = -sinh(2r)/4``.
    """
    if N_sys_a < 0 or N_sys_b < 0:
        raise DomainError("added noise photons must be >= 0")
    S = symplectic_matrix(params)
    sigma = VACUUM_VARIANCE * (S @ S.T)
    sigma += np.diag([N_sys_a / 2, N_sys_a / 2, N_sys_b / 2, N_sys_b / 2])
    # S @ S.T is symmetric analytically; kill rounding asymmetry
    return 0.5 * (sigma + sigma.T)


def rotate_idler(I_b, Q_b, phi):
    """Rotate the idler quadratures by ``phi``."""
    c, s = math.cos(phi), math.sin(phi)
    return c * I_b - s * Q_b, s * I_b + c * Q_b


def combine(point, phi: float) -> CombinedQuad:
    """Add mode-a quadratures to the idler quadratures rotated by ``phi``.

    ``point`` is a 4-vector or an ``(N, 4)`` array of shots.  At ``phi = pi``
    this is ``(I_a - I_b, Q_a - Q_b)``, at ``phi = 0`` the plain sum.
    """
    x = np.asarray(point, dtype=float)
    I_a, Q_a, I_b, Q_b = (x[..., k] for k in range(4))
    I_r, Q_r = rotate_idler(I_b, Q_b, phi)
    I_ab, Q_ab = I_a + I_r, Q_a + Q_r
    if x.ndim == 1:
        I_ab, Q_ab = float(I_ab), float(Q_ab)
    return CombinedQuad(I_ab, Q_ab, phi)


def combination_vector(phi: float, quadrature: str = "I") -> np.ndarray:
    """Linear functional on ``(I_a, Q_a, I_b, Q_b)`` giving ``I_ab`` or ``Q_ab``."""
    c, s = math.cos(phi), math.sin(phi)
    if quadrature == "I":
        return np.array([1.0, 0.0, c, -s])
    if quadrature == "Q":
        return np.array([0.0, 1.0, s, c])
    raise ValueError(f"quadrature must be 'I' or 'Q', got {quadrature!r}")


def nbar_mode(means: QuadMeans, mode: str) -> float:
    if mode == "a":
        return means.I_a**2 + means.Q_a**2
    if mode == "b":
        return means.I_b**2 + means.Q_b**2
    raise ValueError(f"mode must be 'a' or 'b', got {mode!r}")


def nbar_combined(means_in: QuadMeans, phi: float, params: SqueezeParams) -> float:
    """Photon number of the combined mean ``I_ab**2 + Q_ab**2`` after amplification."""
    cq = combine(np.asarray(propagate_means(means_in, params)), phi)
    return cq.I_ab**2 + cq.Q_ab**2


def nbar_combined_extremes(I_in: float, Q_in: float, r: float) -> tuple[float, float]:
    """Closed forms ``(n_antisq_I, n_antisq_Q)``.

    ``e^{2r} I^2 + e^{-2r} Q^2`` at ``phi = phi_p`` (I antisqueezed) and
    ``e^{-2r} I^2 + e^{2r} Q^2`` half a turn away.
    """
    up, down = math.exp(2 * r), math.exp(-2 * r)
    return up * I_in**2 + down * Q_in**2, down * I_in**2 + up * Q_in**2
