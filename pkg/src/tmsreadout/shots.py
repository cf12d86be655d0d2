"""Deterministic Monte Carlo readout shots at the amplifier output plane.

Random streams: for a run seed ``s``, the shots of prepared state ``k``
(0 = g, 1 = e) in sweep cell ``c`` are drawn from
``SeedSequence(s, spawn_key=(c, k))``.  Every (cell, state) pair is
therefore independent of how many other cells run, and in which order.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError, NumericalError
from .mixture import (
    DoubleGaussianFit,
    empirical_fidelity,
    empirical_R,
    fit_double_gaussian,
)
from .signal_model import DispersiveInput, OutputChain
from .squeeze import (
    SqueezeParams,
    combination_vector,
    combine,
    output_covariance,
    propagate_means,
)

SHOT_COLUMNS = ("label", "I_a", "Q_a", "I_b", "Q_b")
STATE_INDEX = {"g": 0, "e": 1}
EIG_CLAMP = -1e-12


@dataclass
class ShotSet:
    """Labeled 4-quadrature shots; ``meta`` records what generated them."""

    shots: np.ndarray
    labels: np.ndarray
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.shots = np.asarray(self.shots, dtype=float).reshape(-1, 4)
        self.labels = np.asarray(self.labels).astype("<U1")
        if self.labels.shape != (self.shots.shape[0],):
            raise ValueError("one label per shot required")

    @property
    def N(self) -> int:
        """Shot count per prepared state (the smaller one if unequal)."""
        return int(min(np.sum(self.labels == "g"), np.sum(self.labels == "e")))

    def of_state(self, state: str) -> np.ndarray:
        return self.shots[self.labels == state]

    def __eq__(self, other):
        if not isinstance(other, ShotSet):
            return NotImplemented
        return (
            np.array_equal(self.shots, other.shots)
            and np.array_equal(self.labels, other.labels)
            and self.seed == other.seed
            and self.meta == other.meta
        )


def _noise(chain) -> float:
    return chain.N_sys if isinstance(chain, OutputChain) else float(chain)


def gaussian_factor(cov: np.ndarray) -> np.ndarray:
    """Symmetric square root of a covariance, clamping tiny negative eigenvalues."""
    w, v = np.linalg.eigh(cov)
    if np.any(w < EIG_CLAMP * max(1.0, float(np.max(np.abs(w))))):
        raise NumericalError(f"covariance is not positive semi-definite; eigenvalues {w}")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T


def state_rng(seed: int, cell: int, state: str) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(cell, STATE_INDEX[state]))
    return np.random.Generator(np.random.PCG64(ss))


def sample_shots(params: SqueezeParams, signal: DispersiveInput, chains=(0.0, 0.0),
                 N: int = 10_000, seed: int = 0, cell: int = 0) -> ShotSet:
    """Draw ``N`` shots per qubit state from the amplified Gaussian state.

    ``chains`` is a pair of :class:`OutputChain` (or plain added-noise photon
    numbers) for modes a and b.  The state label on ``signal`` is ignored;
    both states are generated.
    """
    if N < 1:
        raise DomainError("shot count must be >= 1")
    N_a, N_b = (_noise(c) for c in chains)
    L = gaussian_factor(output_covariance(params, N_a, N_b))
    blocks, labels = [], []
    for state in ("g", "e"):
        mean = np.asarray(propagate_means(signal.with_state(state).means, params))
        z = state_rng(seed, cell, state).standard_normal((N, 4))
        blocks.append(mean + z @ L.T)
        labels.append(np.full(N, state))
    meta = {
        "r": params.r,
        "phi_p": params.phi_p,
        "G": params.G,
        "nbar_in": signal.nbar_in,
        "theta": signal.theta,
        "alpha_bar": signal.alpha_bar,
        "N_sys_a": N_a,
        "N_sys_b": N_b,
        "N": N,
        "cell": cell,
    }
    return ShotSet(np.vstack(blocks), np.concatenate(labels), seed, meta)


def project(shots, mode: str = "a", phi: float = 0.0, quadrature: str = "I") -> np.ndarray:
    """1-D projection: ``mode`` is ``'a'``, ``'b'`` or ``'ab'`` (combined at ``phi``)."""
    x = np.asarray(shots, dtype=float)
    col = {"I": 0, "Q": 1}[quadrature]
    if mode == "a":
        return x[:, col]
    if mode == "b":
        return x[:, 2 + col]
    if mode == "ab":
        return x @ combination_vector(phi, quadrature)
    raise ValueError(f"mode must be 'a', 'b' or 'ab', got {mode!r}")


@dataclass(frozen=True)
class ModeReadout:
    fit: DoubleGaussianFit
    R: float
    F: float


def readout(shotset: ShotSet, mode: str = "a", phi: float = 0.0, method: str = "midpoint") -> ModeReadout:
    """Per-state Gaussian fit, power SNR and fidelity along the I projection."""
    x = project(shotset.shots, mode, phi)
    fit = fit_double_gaussian(x, shotset.labels)
    return ModeReadout(fit, empirical_R(fit), empirical_fidelity(x, shotset.labels, method=method, fit=fit))


@dataclass
class PhiSweep:
    phi: np.ndarray
    F_ab: np.ndarray
    nbar_g: np.ndarray
    nbar_e: np.ndarray

    @property
    def nbar_mean(self) -> np.ndarray:
        return 0.5 * (self.nbar_g + self.nbar_e)

    @property
    def phi_max_F(self) -> float:
        return float(self.phi[np.argmax(self.F_ab)])

    @property
    def phi_min_F(self) -> float:
        return float(self.phi[np.argmin(self.F_ab)])

    @property
    def phi_min_nbar(self) -> float:
        """Angle minimizing the state-averaged combined photon number."""
        return float(self.phi[np.argmin(self.nbar_mean)])


def phi_sweep(shotset: ShotSet, grid) -> PhiSweep:
    """Combined-mode fidelity and per-state photon number versus relative rotation."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise DomainError("phi grid must be nonempty")
    mean_g = shotset.of_state("g").mean(axis=0)
    mean_e = shotset.of_state("e").mean(axis=0)
    F, ng, ne = [], [], []
    for phi in grid:
        x = project(shotset.shots, "ab", phi)
        F.append(empirical_fidelity(x, shotset.labels))
        cg, ce = combine(mean_g, phi), combine(mean_e, phi)
        ng.append(cg.I_ab**2 + cg.Q_ab**2)
        ne.append(ce.I_ab**2 + ce.Q_ab**2)
    return PhiSweep(grid, np.array(F), np.array(ng), np.array(ne))


def angle_distance(a: float, b: float) -> float:
    """Smallest absolute difference between two angles, radians."""
    d = (a - b) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


# -- serialization -----------------------------------------------------------

def _header_dict(shotset: ShotSet, extra: dict | None = None) -> dict:
    h = {"seed": shotset.seed, "meta": shotset.meta}
    if extra:
        h.update(extra)
    return h


def write_shots_csv(path, shotset: ShotSet, header: dict | None = None) -> None:
    """CSV with a ``#``-prefixed JSON header line; floats written round-trip exact."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write("# " + json.dumps(_header_dict(shotset, header), sort_keys=True) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SHOT_COLUMNS)
        for lab, row in zip(shotset.labels, shotset.shots):
            w.writerow([lab, *(repr(float(v)) for v in row)])


def read_shots_csv(path) -> ShotSet:
    path = Path(path)
    header = {}
    with path.open() as fh:
        lines = [ln for ln in fh]
    body = []
    for ln in lines:
        if ln.startswith("#"):
            header.update(json.loads(ln[1:]))
        else:
            body.append(ln)
    rows = list(csv.reader(body))
    if not rows or tuple(rows[0]) != SHOT_COLUMNS:
        raise ValueError(f"{path}: expected columns {','.join(SHOT_COLUMNS)}")
    labels = np.array([r[0] for r in rows[1:]])
    shots = np.array([[float(v) for v in r[1:]] for r in rows[1:]]).reshape(-1, 4)
    return ShotSet(shots, labels, header.get("seed"), header.get("meta", {}))


def write_shots_npz(path, shotset: ShotSet, header: dict | None = None) -> None:
    """Compact binary form: float64 shots, uint8 labels, JSON header string."""
    codes = np.array([STATE_INDEX[s] for s in shotset.labels], dtype=np.uint8)
    with open(path, "wb") as fh:
        np.savez_compressed(
            fh,
            shots=shotset.shots,
            labels=codes,
            header=np.array(json.dumps(_header_dict(shotset, header), sort_keys=True)),
        )


def read_shots_npz(path) -> ShotSet:
    with np.load(path, allow_pickle=False) as z:
        header = json.loads(str(z["header"]))
        labels = np.array(["g", "e"])[z["labels"]]
        return ShotSet(z["shots"], labels, header.get("seed"), header.get("meta", {}))
