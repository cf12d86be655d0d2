"""Subcommand bodies: each takes a resolved :class:`RunConfig` and returns a
:class:`Report` together with the raw result object (used for plotting)."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import metrics
from .backaction import dephasing_rate, fit_isolation, gamma_c_from_hz, read_coherence_csv
from .calibration import (
    fit_noise_vs_gain,
    noise_rise_photons,
    read_noise_csv,
    snr_improvement,
    snr_improvement_limit,
)
from .config import RunConfig
from .constants import TWO_PI, db_to_linear
from .errors import ConfigError
from .fixtures import resolve_path
from .report import Report
from .shots import phi_sweep, readout, sample_shots
from .signal_model import DispersiveInput
from .squeeze import SqueezeParams, nbar_combined_extremes

ANALYTIC_COLUMNS = (
    "G_dB", "r", "I2_in", "R_a", "R_b", "R_ab_max", "R_ab_min",
    "F_a", "F_ab_max", "F_ab_min", "ratio", "deltaF", "nbar_ab_max", "nbar_ab_min",
)
SIM_METRIC_COLUMNS = ("mode", "phi_deg", "R_emp", "R_model", "F_emp", "F_model", "unresolved")
PHI_COLUMNS = ("G_dB", "phi_deg", "F_ab", "nbar_ab_g", "nbar_ab_e")
CALIBRATION_COLUMNS = ("G_dB", "value", "model", "residual", "noise_rise", "snr_improvement")
BACKACTION_COLUMNS = ("G_dB", "gamma_phi", "nbar_th", "nbar_fit", "residual")


def _deg(x: float) -> float:
    return round(math.degrees(x), 9)


def _input_quadratures(cfg: RunConfig) -> tuple[float, float]:
    amp = math.sqrt(cfg["nbar_in"])
    return math.sin(cfg["theta"] / 2) * amp, math.cos(cfg["theta"] / 2) * amp


def run_analytic(cfg: RunConfig):
    I_in, Q_in = _input_quadratures(cfg)
    I2 = cfg["i2_in"] if cfg["i2_in"] is not None else I_in**2
    Na, Nb = cfg["n_sys_a"], cfg["n_sys_b"]
    rows = []
    for g_db in cfg["gains"]:
        G = db_to_linear(g_db)
        p = metrics.metric_point(G, Na, Nb, I2)
        r = metrics._r_from_gain(G).item()
        hi, lo = nbar_combined_extremes(I_in, Q_in, r)
        rows.append((
            g_db, r, I2, p.R_a, float(metrics.R_b(r, Nb, I2)), p.R_ab_max, p.R_ab_min,
            p.F_a, p.F_ab_max, p.F_ab_min, p.ratio, p.delta_F, hi, lo,
        ))
    return Report(ANALYTIC_COLUMNS, rows), rows


def _model_R(mode: str, r: float, Na: float, Nb: float, I2: float) -> float:
    return float({
        "a": lambda: metrics.R_a(r, Na, I2),
        "b": lambda: metrics.R_b(r, Nb, I2),
        "ab_max": lambda: metrics.R_ab_max(r, Na, Nb, I2),
        "ab_min": lambda: metrics.R_ab_min(r, Na, Nb, I2),
    }[mode]())


def simulate_cell(cfg: RunConfig, g_db: float, cell: int):
    params = SqueezeParams.from_gain_db(g_db, cfg["pump_phase"])
    signal = DispersiveInput(cfg["nbar_in"], cfg["theta"], "g", cfg["alpha_bar"])
    return sample_shots(params, signal, (cfg["n_sys_a"], cfg["n_sys_b"]), cfg["shots"], cfg.seed, cell)


def shot_metrics(cfg: RunConfig, shotset) -> Report:
    """Empirical versus closed-form SNR and fidelity for each readout mode.

    The combined mode is read at ``phi = pump phase`` (antisqueezed I) and
    half a turn away (squeezed I).
    """
    r = shotset.meta["r"]
    Na, Nb = cfg["n_sys_a"], cfg["n_sys_b"]
    I2 = _input_quadratures(cfg)[0] ** 2
    phi_p = cfg["pump_phase"]
    rows = []
    for name, mode, phi in (("a", "a", 0.0), ("b", "b", 0.0),
                            ("ab_max", "ab", phi_p), ("ab_min", "ab", phi_p + math.pi)):
        ro = readout(shotset, mode, phi)
        R_mod = _model_R(name, r, Na, Nb, I2)
        rows.append((name, _deg(phi % (2 * math.pi)), ro.R, R_mod, ro.F,
                     metrics.fidelity_from_R(R_mod), int(ro.fit.unresolved)))
    return Report(SIM_METRIC_COLUMNS, rows, {"G_dB": cfg["gain"], "shots_per_state": cfg["shots"]})


def run_phi_sweep(cfg: RunConfig):
    grid = cfg["phi"]

    def one(item):
        cell, g_db = item
        return g_db, phi_sweep(simulate_cell(cfg, g_db, cell), grid)

    items = list(enumerate(cfg["gains"]))
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(one, items))
    else:
        results = [one(it) for it in items]

    rows, summary = [], []
    for g_db, sw in results:
        for phi, F, ng, ne in zip(sw.phi, sw.F_ab, sw.nbar_g, sw.nbar_e):
            rows.append((g_db, _deg(phi), F, ng, ne))
        summary.append({
            "G_dB": g_db,
            "phi_max_F_deg": _deg(sw.phi_max_F),
            "phi_min_F_deg": _deg(sw.phi_min_F),
            "phi_min_nbar_deg": _deg(sw.phi_min_nbar),
            "F_ab_max": float(sw.F_ab.max()),
            "F_ab_min": float(sw.F_ab.min()),
        })
    return Report(PHI_COLUMNS, rows, {"per_gain": summary}), results


def run_landscape(cfg: RunConfig):
    land = metrics.landscape(cfg["gain_grid"], cfg["n_sys_grid"], cfg["landscape_i2_in"], jobs=cfg.jobs)
    sections = []
    for g in cfg["cross_sections"]:
        cs = land.cross_section(g)
        hi = cs["F_ab"] > 0.995
        sections.append({
            "G_dB": float(cs["G_dB"]),
            "ratio_max": float(cs["ratio"].max()),
            "deltaF_max": float(cs["deltaF"].max()),
            "deltaF_max_where_F_ab_gt_0.995": float(cs["deltaF"][hi].max()) if hi.any() else None,
        })
    positive = land.G_dB > 0
    summary = {
        "I2_in": land.I2_in,
        "ratio_max": float(land.ratio.max()),
        "deltaF_min_above_0dB": float(land.delta_F[positive].min()) if positive.any() else None,
        "points_deltaF_le_0_above_0dB": int((land.delta_F[positive] <= 0).sum()),
        "cross_sections": sections,
    }
    return Report(metrics.LANDSCAPE_COLUMNS, list(land.rows()), summary), land


def _input_path(cfg: RunConfig, fallback_key: str):
    value = cfg["input"] or cfg[fallback_key]
    if value is None:
        raise ConfigError("no input data file given", key="params.input")
    path = resolve_path(value)
    if not path.is_file():
        raise ConfigError(f"input file not found: {path}", key="params.input")
    return path


def run_calibrate(cfg: RunConfig):
    mode = cfg["mode"]
    points = read_noise_csv(_input_path(cfg, f"calibration_input_{mode}"))
    omega = TWO_PI * cfg[f"f_{mode}"]
    fit = fit_noise_vs_gain(points, omega, cfg["t_int"])
    model = fit.model(points.G, points.kind)
    rise = noise_rise_photons(points.G, fit.N_sys)
    improve = snr_improvement(points.G, fit.N_sys, omega)
    rows = [
        (round(10 * math.log10(g), 10), v, m, v - m, nr, si)
        for g, v, m, nr, si in zip(points.G, points.value, model, rise, improve)
    ]
    summary = {
        "mode": mode,
        "kind": points.kind,
        "G_sys": fit.G_sys,
        "N_sys": fit.N_sys,
        "T_sys_K": fit.T_sys,
        "P_0_W": fit.P_0,
        "fit_rms": fit.fit_rms,
        "snr_improvement_limit": snr_improvement_limit(fit.N_sys, omega),
    }
    return Report(CALIBRATION_COLUMNS, rows, summary), (points, fit)


def run_backaction(cfg: RunConfig):
    table = read_coherence_csv(_input_path(cfg, "backaction_input"))
    gc = gamma_c_from_hz(cfg["kappa"], cfg["chi"])
    nth = table.thermal_population(gc)
    fit = fit_isolation(table.G, nth)
    pred = fit.slope * table.G + fit.intercept
    gphi = dephasing_rate(table.T1, table.T2E) if table.T1 is not None else nth * gc
    rows = [
        (round(10 * math.log10(g), 10), float(gp), float(n), float(p), float(n - p))
        for g, gp, n, p in zip(table.G, np.atleast_1d(gphi), nth, pred)
    ]
    summary = {"L": fit.L, "L_dB": fit.L_dB, "nth_a": fit.nth_a, "gamma_c": gc, "fit_rms": fit.rms}
    return Report(BACKACTION_COLUMNS, rows, summary), (table.G, nth, fit)


RUNNERS = {
    "analytic": run_analytic,
    "phi-sweep": run_phi_sweep,
    "landscape": run_landscape,
    "calibrate": run_calibrate,
    "backaction": run_backaction,
}
