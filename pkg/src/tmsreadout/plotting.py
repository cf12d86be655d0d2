"""PNG figures for the command-line reports (matplotlib, Agg backend)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .calibration import noise_rise_photons, snr_improvement  # noqa: E402
from .constants import TWO_PI  # noqa: E402
from .shots import project  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata={"Software": None})
    plt.close(fig)


def plot_analytic(rows, path):
    g = np.array([r[0] for r in rows])
    fig, ax = plt.subplots(1, 2, figsize=(9, 3.6))
    for idx, name in ((3, "R_a"), (4, "R_b"), (5, "R_ab max"), (6, "R_ab min")):
        ax[0].plot(g, [r[idx] for r in rows], "o-", label=name)
    ax[0].set(xlabel="gain (dB)", ylabel="power SNR", yscale="log")
    ax[0].legend()
    for idx, name in ((7, "F_a"), (8, "F_ab max"), (9, "F_ab min")):
        ax[1].plot(g, [r[idx] for r in rows], "o-", label=name)
    ax[1].set(xlabel="gain (dB)", ylabel="fidelity")
    ax[1].legend()
    _save(fig, path)


def plot_shots(shotset, path, phi_ab: float):
    fig, ax = plt.subplots(1, 3, figsize=(12, 3.8))
    for s, c in (("g", "tab:blue"), ("e", "tab:red")):
        x = shotset.of_state(s)
        ax[0].scatter(x[:, 0], x[:, 1], s=1, alpha=0.3, c=c, label=s)
        ax[1].scatter(x[:, 2], x[:, 3], s=1, alpha=0.3, c=c, label=s)
        proj = project(x, "ab", phi_ab)
        ax[2].hist(proj, bins=100, alpha=0.6, color=c, label=s)
    ax[0].set(xlabel="I_a", ylabel="Q_a", title="mode a")
    ax[1].set(xlabel="I_b", ylabel="Q_b", title="mode b")
    ax[2].set(xlabel="I_ab", ylabel="counts", title=f"combined, phi={math.degrees(phi_ab):.0f} deg")
    for a in ax:
        a.legend(markerscale=8)
    _save(fig, path)


def plot_phi_sweep(results, path):
    fig, ax = plt.subplots(1, 2, figsize=(10, 3.8))
    for g_db, sw in results:
        deg = np.degrees(sw.phi)
        ax[0].plot(deg, sw.F_ab, label=f"{g_db:g} dB")
        ax[1].plot(deg, sw.nbar_g, label=f"g, {g_db:g} dB")
        ax[1].plot(deg, sw.nbar_e, "--", label=f"e, {g_db:g} dB")
    ax[0].set(xlabel="phi (deg)", ylabel="F_ab")
    ax[1].set(xlabel="phi (deg)", ylabel="combined photons", yscale="log")
    ax[0].legend()
    ax[1].legend(fontsize=7)
    _save(fig, path)


def plot_landscape(land, cross_sections, path):
    fig, ax = plt.subplots(1, 3, figsize=(14, 4))
    ext = (land.N_sys[0], land.N_sys[-1], land.G_dB[0], land.G_dB[-1])
    im = ax[0].imshow(land.ratio, origin="lower", aspect="auto", extent=ext)
    fig.colorbar(im, ax=ax[0], label="R_ab / R_a")
    im = ax[1].imshow(land.delta_F, origin="lower", aspect="auto", extent=ext, cmap="RdBu_r",
                      vmin=-abs(land.delta_F).max(), vmax=abs(land.delta_F).max())
    fig.colorbar(im, ax=ax[1], label="F_ab - F_a")
    for a in ax[:2]:
        a.set(xlabel="N_sys", ylabel="gain (dB)")
    for g in cross_sections:
        cs = land.cross_section(g)
        ax[2].plot(cs["N_sys"], cs["deltaF"], label=f"{float(cs['G_dB']):g} dB")
    ax[2].axhline(0, color="k", lw=0.5)
    ax[2].set(xlabel="N_sys", ylabel="F_ab - F_a")
    ax[2].legend()
    _save(fig, path)


def plot_calibration(points, fit, path):
    g_db = 10 * np.log10(points.G)
    fine = np.linspace(points.G.min(), points.G.max(), 200)
    omega = fit.omega
    fig, ax = plt.subplots(1, 2, figsize=(10, 3.8))
    ax[0].plot(g_db, points.value, "o", label="data")
    ax[0].plot(10 * np.log10(fine), fit.model(fine, points.kind), label="fit")
    ax[0].set(xlabel="gain (dB)", ylabel=f"noise ({points.kind})")
    ax[0].legend()
    ax[1].plot(10 * np.log10(fine), noise_rise_photons(fine, fit.N_sys), label="noise rise")
    ax[1].plot(10 * np.log10(fine), snr_improvement(fine, fit.N_sys, omega), label="SNR improvement")
    ax[1].set(xlabel="gain (dB)", title=f"f = {omega / TWO_PI / 1e9:.4g} GHz")
    ax[1].legend()
    _save(fig, path)


def plot_backaction(G, nth, fit, path):
    fig, ax = plt.subplots(figsize=(5, 3.8))
    ax.plot(G, nth, "o", label="data")
    fine = np.linspace(G.min(), G.max(), 100)
    ax.plot(fine, fit.slope * fine + fit.intercept, label=f"L = {fit.L_dB:.2f} dB")
    ax.set(xlabel="gain (linear)", ylabel="resonator thermal photons")
    ax.legend()
    _save(fig, path)
