"""Dispersive input signal and classical output chains.

Raw integrated voltages are converted to room-temperature photon units with
``gamma = T_int / (R hbar omega)`` and then referred back to the amplifier
output plane by dividing by ``sqrt(G_sys)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import DEFAULT_LOAD_OHMS, HBAR, K_B, TWO_PI
from .errors import DomainError
from .squeeze import QuadMeans

STATES = ("g", "e")


@dataclass(frozen=True)
class DispersiveInput:
    """Coherent readout tone at the amplifier input.

    ``nbar_in`` is the photon number at the amplifier input, ``theta`` the
    dispersive phase separation (radians) between the two qubit states.
    ``alpha_bar`` only matters when building from a resonator population.
    """

    nbar_in: float
    theta: float
    state: str = "g"
    alpha_bar: float = 1.0

    def __post_init__(self):
        if self.nbar_in < 0:
            raise DomainError(f"photon number must be >= 0, got {self.nbar_in}")
        if self.state not in STATES:
            raise DomainError(f"qubit state must be 'g' or 'e', got {self.state!r}")
        if not 0 < self.alpha_bar <= 1:
            raise DomainError(f"insertion-loss factor must lie in (0, 1], got {self.alpha_bar}")

    @classmethod
    def from_resonator(cls, nbar_resonator: float, theta: float, state: str = "g",
                       alpha_bar: float = 1.0) -> "DispersiveInput":
        return cls(alpha_bar * nbar_resonator, theta, state, alpha_bar)

    @property
    def nbar_resonator(self) -> float:
        return self.nbar_in / self.alpha_bar

    @property
    def means(self) -> QuadMeans:
        return encode_input(self.nbar_in, self.theta, self.state)

    def with_state(self, state: str) -> "DispersiveInput":
        return DispersiveInput(self.nbar_in, self.theta, state, self.alpha_bar)


def encode_input(nbar_in: float, theta: float, state: str = "g") -> QuadMeans:
    """Input-plane means; the idler port carries vacuum.

    The two states sit symmetrically about the positive Q axis, ``g`` at
    positive I.
    """
    if nbar_in < 0:
        raise DomainError(f"photon number must be >= 0, got {nbar_in}")
    if state not in STATES:
        raise DomainError(f"qubit state must be 'g' or 'e', got {state!r}")
    amp = math.sqrt(nbar_in)
    sign = 1.0 if state == "g" else -1.0
    return QuadMeans(sign * math.sin(theta / 2) * amp, math.cos(theta / 2) * amp, 0.0, 0.0)


@dataclass(frozen=True)
class OutputChain:
    """Classical amplification chain behind one amplifier port.

    ``N_sys`` is referred to the amplifier output plane; ``omega`` is the
    mode angular frequency in rad/s.
    """

    G_sys: float
    N_sys: float
    omega: float
    T_int: float = 1e-6
    R_load: float = DEFAULT_LOAD_OHMS

    def __post_init__(self):
        if self.G_sys <= 0 or self.T_int <= 0 or self.omega <= 0 or self.R_load <= 0:
            raise DomainError("chain gain, frequency, integration time and load must be > 0")
        if self.N_sys < 0:
            raise DomainError(f"added noise must be >= 0, got {self.N_sys}")

    @classmethod
    def from_frequency(cls, G_sys, N_sys, frequency_hz, T_int=1e-6, R_load=DEFAULT_LOAD_OHMS):
        return cls(G_sys, N_sys, TWO_PI * frequency_hz, T_int, R_load)

    @property
    def T_sys(self) -> float:
        """Noise temperature of the chain in kelvin."""
        return self.N_sys * HBAR * self.omega / K_B

    @property
    def gamma(self) -> float:
        """Volts^-2 conversion factor to room-temperature photon units."""
        return conversion_factor(self.T_int, self.omega, self.R_load)

    @property
    def bandwidth(self) -> float:
        return 1.0 / self.T_int


def conversion_factor(T_int: float, omega: float, R_load: float = DEFAULT_LOAD_OHMS) -> float:
    return T_int / (R_load * HBAR * omega)


def volts_to_photon_units(I_raw, Q_raw, chain: OutputChain):
    """Integrated voltages to dimensionless room-temperature quadratures."""
    k = math.sqrt(chain.gamma)
    return np.multiply(I_raw, k), np.multiply(Q_raw, k)


def photon_units_to_volts(I_rt, Q_rt, chain: OutputChain):
    k = math.sqrt(chain.gamma)
    return np.divide(I_rt, k), np.divide(Q_rt, k)


def refer_to_amplifier_output(I_rt, Q_rt, chain: OutputChain):
    """Undo the chain amplitude gain ``sqrt(G_sys)``."""
    k = math.sqrt(chain.G_sys)
    return np.divide(I_rt, k), np.divide(Q_rt, k)


def refer_to_room_temperature(I, Q, chain: OutputChain):
    k = math.sqrt(chain.G_sys)
    return np.multiply(I, k), np.multiply(Q, k)


def volts_to_amplifier_plane(I_raw, Q_raw, chain: OutputChain):
    return refer_to_amplifier_output(*volts_to_photon_units(I_raw, Q_raw, chain), chain)


def amplifier_plane_to_volts(I, Q, chain: OutputChain):
    return photon_units_to_volts(*refer_to_room_temperature(I, Q, chain), chain)
