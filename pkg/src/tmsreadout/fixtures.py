"""Named parameter sets.

``paper-defaults`` carries the device, readout and output-chain values of
the reference experiment.  Extra fixtures are read from ``*.yaml`` files in
the directory named by ``$TMSREADOUT_FIXTURE_DIR``; a file ``foo.yaml``
defines fixture ``foo`` and may set ``base: <name>`` to extend another one.
"""

from __future__ import annotations

import math
import os
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from .calibration import NoisePowerPoints, model_noise_power
from .constants import TWO_PI
from .errors import ConfigError

FIXTURE_DIR_ENV = "TMSREADOUT_FIXTURE_DIR"
DATA_PREFIX = "@data/"

BASE_FIXTURE = {
    "theta": "53.7deg",
    "f_r": "7.2284GHz",
    "kappa": "1.91MHz",
    "chi": "0.94MHz",
    "t1": "75us",
    "t2e": "52us",
    "f_a": "7.2284GHz",
    "f_b": "9.7056GHz",
    "g_sys_a": 3.4e6,
    "g_sys_b": 1.7e7,
    "n_sys_a": 28.2,
    "n_sys_b": 13.4,
    "nbar_in": 90,
    "shots": 10000,
    "t_int": "1us",
    "pump_phase": "180deg",
    "gains": ["1.3dB", "2.3dB", "3.3dB", "4dB"],
    "landscape_i2_in": 5,
    "calibration_input_a": DATA_PREFIX + "calibration_out_a.csv",
    "calibration_input_b": DATA_PREFIX + "calibration_out_b.csv",
    "backaction_input": DATA_PREFIX + "backaction_coherence.csv",
}

BUILTIN = {"paper-defaults": BASE_FIXTURE}


def _from_dir() -> dict[str, dict]:
    d = os.environ.get(FIXTURE_DIR_ENV)
    if not d:
        return {}
    out = {}
    for p in sorted(Path(d).glob("*.yaml")):
        try:
            data = yaml.safe_load(p.read_text()) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"{p}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{p}: fixture file must be a mapping")
        out[p.stem] = data
    return out


def available() -> list[str]:
    return sorted({**BUILTIN, **_from_dir()})


def fixtures() -> dict[str, dict]:
    """All fixtures by name, with ``base`` inheritance resolved."""
    raw = {**BUILTIN, **_from_dir()}
    resolved: dict[str, dict] = {}

    def resolve(name, chain=()):
        if name in resolved:
            return resolved[name]
        if name not in raw:
            raise ConfigError(f"unknown fixture {name!r}; available: {', '.join(sorted(raw))}")
        if name in chain:
            raise ConfigError(f"fixture inheritance cycle: {' -> '.join(chain + (name,))}")
        data = dict(raw[name])
        base = data.pop("base", None)
        merged = {**resolve(base, chain + (name,)), **data} if base else data
        resolved[name] = merged
        return merged

    for n in raw:
        resolve(n)
    return resolved


def get_fixture(name: str) -> dict:
    all_ = fixtures()
    if name not in all_:
        raise ConfigError(f"unknown fixture {name!r}; available: {', '.join(sorted(all_))}", key="fixture")
    return dict(all_[name])


def resolve_path(value: str) -> Path:
    """Map ``@data/...`` onto the bundled data directory."""
    if value.startswith(DATA_PREFIX):
        return Path(str(resources.files("tmsreadout") / "data" / value[len(DATA_PREFIX):]))
    return Path(value)


# -- synthetic measurement sets shipped as data files ---------------------------

CALIBRATION_GAINS_DB = np.round(np.arange(0.0, 20.0 + 1e-9, 0.5), 10)
CHAIN_REFERENCE = {"a": (3.4e6, 28.2, 7.2284e9), "b": (1.7e7, 13.4, 9.7056e9)}


def synthetic_calibration(mode: str, rel_noise: float = 0.05, seed: int = 2024,
                          T_int: float = 1e-6) -> NoisePowerPoints:
    """Noise power versus gain for one output line with multiplicative noise."""
    G_sys, N_sys, f = CHAIN_REFERENCE[mode]
    G = 10.0 ** (CALIBRATION_GAINS_DB / 10.0)
    P = model_noise_power(G, G_sys, N_sys, TWO_PI * f, T_int)
    if rel_noise:
        rng = np.random.default_rng(seed)
        P = P * (1.0 + rel_noise * rng.standard_normal(P.shape))
    return NoisePowerPoints(G, P, "power")


BACKACTION_GAINS_DB = np.round(np.arange(0.0, 6.0 + 1e-9, 0.5), 10)


def synthetic_coherence(L_db: float = -18.0, T1: float = 75e-6, T2E_unity: float = 52e-6,
                        kappa_hz: float = 1.91e6, chi_hz: float = 0.94e6,
                        rel_noise: float = 0.02, seed: int = 7):
    """(G, T1, T2E) records whose thermal population rises as ``L G + (n_a - L)``.

    ``n_a`` is fixed by the unity-gain coherence times.
    """
    from .backaction import dephasing_rate, gamma_c_from_hz, nth_model_small, t2e_from_dephasing

    gc = gamma_c_from_hz(kappa_hz, chi_hz)
    n_a = dephasing_rate(T1, T2E_unity) / gc
    G = 10.0 ** (BACKACTION_GAINS_DB / 10.0)
    nth = nth_model_small(G, 10.0 ** (L_db / 10.0), n_a)
    if rel_noise:
        nth = nth * (1.0 + rel_noise * np.random.default_rng(seed).standard_normal(nth.shape))
    T2E = t2e_from_dephasing(T1, nth * gc)
    return G, np.full_like(G, T1), T2E


def write_data_files(directory) -> None:
    """Regenerate the bundled synthetic data files."""
    import csv

    from .calibration import write_noise_csv

    directory = Path(directory)
    for mode in ("a", "b"):
        write_noise_csv(directory / f"calibration_out_{mode}.csv", synthetic_calibration(mode))
    G, T1, T2E = synthetic_coherence()
    with (directory / "backaction_coherence.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["G_dB", "T1_us", "T2E_us"])
        for g, t1, t2 in zip(G, T1, T2E):
            w.writerow([repr(round(10 * math.log10(g), 10)), repr(float(t1 * 1e6)), repr(float(t2 * 1e6))])
