"""Acceptance criteria, one test per criterion.

Each test records a single ``[criterion N] PASS|FAIL`` line with the measured
quantity; the lines are printed together in an "acceptance criteria" section
at the end of the pytest run.
"""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, overlap_fidelity
from tmsreadout.backaction import (
    dephasing_rate,
    fit_isolation,
    gamma_c,
    gamma_c_from_hz,
    nth_from_dephasing,
)
from tmsreadout.calibration import fit_noise_vs_gain
from tmsreadout.constants import TWO_PI
from tmsreadout.fixtures import CHAIN_REFERENCE, synthetic_calibration, synthetic_coherence
from tmsreadout.metrics import (
    R_a,
    R_ab_max,
    R_ab_min,
    fidelity_from_R,
    landscape,
)
from tmsreadout.mixture import fidelity_stderr
from tmsreadout.shots import angle_distance, phi_sweep, readout, sample_shots
from tmsreadout.signal_model import DispersiveInput
from tmsreadout.squeeze import READOUT_PUMP_PHASE, SqueezeParams, gain_to_r, output_covariance

FIXTURE_GAINS_DB = (1.3, 2.3, 3.3, 4.0)
N_SYS_A, N_SYS_B = 28.2, 13.4
NBAR_IN = 90.0
THETA = math.radians(53.7)
I2_LANDSCAPE = 5.0


def verdict(n, ok, text):
    line = f"[criterion {n}] {'PASS' if ok else 'FAIL'} {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_headline_ratio():
    t0 = time.perf_counter()
    r = gain_to_r(10 ** 0.8)
    ratio = float(R_ab_max(r, 50, 50, 1.0) / R_a(r, 50, 1.0))
    dt = time.perf_counter() - t0
    ok = abs(ratio - 1.66) <= 0.02 and dt < 0.05
    verdict(1, ok, f"R_ab_max/R_a at 8 dB, N_sys=50: {ratio:.5f} (target 1.66 +/- 0.02), {dt * 1e3:.2f} ms")


def _advantage_grid():
    G_dB = np.round(np.arange(1.25, 24.0 + 1e-9, 0.25), 10)
    N = np.round(np.arange(1.0, 50.0 + 1e-9, 0.5), 10)
    return G_dB, N


def test_criterion_2_advantage_region():
    G_dB, N = _advantage_grid()
    t0 = time.perf_counter()
    land = landscape(G_dB, N, I2_LANDSCAPE)
    dt = time.perf_counter() - t0
    bad = land.delta_F <= 0
    i, j = np.unravel_index(np.argmin(land.delta_F), land.delta_F.shape)
    ok = not bad.any() and G_dB.size * N.size <= 10_000 and dt < 1.0
    verdict(2, ok, (
        f"deltaF > 0 on {G_dB.size}x{N.size} grid G in (1,24] dB, N_sys in (0.5,50]: "
        f"{int(bad.sum())} points with deltaF <= 0, min {land.delta_F[i, j]:.5f} "
        f"at G={G_dB[i]} dB N_sys={N[j]}, {dt * 1e3:.0f} ms"
    ))


def test_criterion_3_high_fidelity_band():
    N = np.round(np.arange(8.0, 50.0 + 1e-9, 0.5), 10)
    land = landscape([20.0], N, I2_LANDSCAPE)
    hi = land.F_ab_max[0] > 0.995
    best = float(land.delta_F[0][hi].max()) if hi.any() else float("nan")
    ok = hi.any() and 0.0005 <= best <= 0.0025
    verdict(3, ok, f"max deltaF at 20 dB over N_sys in [8,50] with F_ab > 0.995: {best:.7f} "
                   f"(band [0.0005, 0.0025]), {int(hi.sum())} qualifying points")


def test_criterion_4a_unity_gain_halving():
    N = np.array([0.0, 0.5, 1.0, 13.4, 28.2, 50.0])
    ratio = R_a(0.0, N, 1.0) / R_ab_max(0.0, N, N, 1.0)
    ok = bool(np.all(ratio == 2.0))
    verdict("4a", ok, f"R_a/R_ab at r=0 with equal noise: {ratio.tolist()} (exactly 2)")


def test_criterion_4b_noiseless_equality():
    r = np.logspace(-3, 1, 41)
    rel = np.abs(R_ab_max(r, 0, 0, 1.0) / R_a(r, 0, 1.0) - 1)
    ok = bool(np.all(rel <= 1e-10))
    worst = int(np.argmax(rel))
    verdict("4b", ok, (
        f"R_ab_max == R_a at N_sys=0 on r in logspace(1e-3, 10, 41): max rel diff {rel[worst]:.3e} "
        f"at r={r[worst]:.4g}, {int((rel > 1e-10).sum())}/41 points outside 1e-10"
    ))


def test_criterion_5_squeezing_identities():
    worst = 0.0
    for r in np.linspace(0.0, 3.0, 301):
        s = output_covariance(SqueezeParams(r))
        pairs = (
            ((1, 0, -1, 0), math.exp(-2 * r) / 2),
            ((0, 1, 0, 1), math.exp(-2 * r) / 2),
            ((1, 0, 1, 0), math.exp(2 * r) / 2),
            ((0, 1, 0, -1), math.exp(2 * r) / 2),
        )
        for v, target in pairs:
            v = np.asarray(v, dtype=float)
            worst = max(worst, abs(v @ s @ v - target) / target)
    ok = worst <= 1e-10
    verdict(5, ok, f"quadratic forms vs e^(-+2r)/2 for r in [0,3]: max rel error {worst:.2e} (<= 1e-10)")


@pytest.mark.parametrize("g_db", FIXTURE_GAINS_DB)
def test_criterion_6_monte_carlo(g_db):
    N = 100_000
    t0 = time.perf_counter()
    params = SqueezeParams.from_gain_db(g_db, READOUT_PUMP_PHASE)
    shots = sample_shots(params, DispersiveInput(NBAR_IN, THETA), (N_SYS_A, N_SYS_B), N, seed=1,
                         cell=FIXTURE_GAINS_DB.index(g_db))
    I2 = math.sin(THETA / 2) ** 2 * NBAR_IN
    r = params.r
    cases = (
        ("a", "a", 0.0, R_a(r, N_SYS_A, I2)),
        ("ab_max", "ab", math.pi, R_ab_max(r, N_SYS_A, N_SYS_B, I2)),
        ("ab_min", "ab", 0.0, R_ab_min(r, N_SYS_A, N_SYS_B, I2)),
    )
    parts, ok = [], True
    for name, mode, phi, R_model in cases:
        ro = readout(shots, mode, phi)
        F_model = fidelity_from_R(float(R_model))
        rel = abs(ro.R / R_model - 1)
        sig = fidelity_stderr(F_model, N)
        z = abs(ro.F - F_model) / sig
        ok &= rel <= 0.05 and z <= 3
        parts.append(f"{name}: R err {rel * 100:.2f}%, F z={z:.2f}")
    dt = time.perf_counter() - t0
    ok &= dt < 10
    verdict(6, ok, f"G={g_db} dB, 1e5 shots/state: " + "; ".join(parts) + f"; {dt:.2f} s")


@pytest.mark.parametrize("g_db", FIXTURE_GAINS_DB)
def test_criterion_7_phi_sweep(g_db):
    params = SqueezeParams.from_gain_db(g_db, READOUT_PUMP_PHASE)
    shots = sample_shots(params, DispersiveInput(NBAR_IN, THETA), (N_SYS_A, N_SYS_B), 100_000, seed=1,
                         cell=FIXTURE_GAINS_DB.index(g_db))
    sw = phi_sweep(shots, np.radians(np.arange(0.0, 360.0, 2.0)))
    tol = math.radians(10)
    d_max = angle_distance(sw.phi_max_F, math.pi)
    d_min = angle_distance(sw.phi_min_F, 0.0)
    d_n = angle_distance(sw.phi_min_nbar, math.pi)
    ok = d_max <= tol and d_min <= tol and d_n <= tol
    verdict(7, ok, (
        f"G={g_db} dB: argmax F_ab {math.degrees(sw.phi_max_F):.0f} deg, argmin F_ab "
        f"{math.degrees(sw.phi_min_F):.0f} deg, joint nbar_ab minimum {math.degrees(sw.phi_min_nbar):.0f} deg"
    ))


def test_criterion_8_calibration():
    parts, ok = [], True
    for mode, T_expected in (("a", 9.8), ("b", 6.2)):
        G_sys, N_sys, f = CHAIN_REFERENCE[mode]
        omega = TWO_PI * f
        clean = fit_noise_vs_gain(synthetic_calibration(mode, rel_noise=0.0), omega, 1e-6)
        noisy = fit_noise_vs_gain(synthetic_calibration(mode, rel_noise=0.05), omega, 1e-6)
        e_clean = max(abs(clean.G_sys / G_sys - 1), abs(clean.N_sys / N_sys - 1))
        e_noisy = max(abs(noisy.G_sys / G_sys - 1), abs(noisy.N_sys / N_sys - 1))
        e_T = abs(clean.T_sys / T_expected - 1)
        ok &= e_clean <= 1e-3 and e_noisy <= 0.10 and e_T <= 0.01
        parts.append(f"OUT_{mode}: noiseless err {e_clean:.1e}, 5%-noise err {e_noisy * 100:.2f}%, "
                     f"T_sys {clean.T_sys:.3f} K vs {T_expected} K")
    verdict(8, ok, "; ".join(parts))


def test_criterion_9_backaction():
    G, T1, T2E = synthetic_coherence(L_db=-18.0)
    gc = gamma_c_from_hz(1.91e6, 0.94e6)
    fit = fit_isolation(G, nth_from_dephasing(dephasing_rate(T1, T2E), gc))
    k, c = TWO_PI * 1.91e6, TWO_PI * 0.94e6
    gc_rel = abs(gc / (k * c**2 / (k**2 + c**2)) - 1)
    ok = abs(fit.L_dB + 18.0) <= 0.2 and gc_rel <= 1e-6 and gc == gamma_c(k, c)
    verdict(9, ok, f"fitted L = {fit.L_dB:.3f} dB (target -18 +/- 0.2); Gamma_c = {gc:.5e} s^-1, "
                   f"rel diff to formula {gc_rel:.1e}")


def test_criterion_10_fidelity_oracle():
    R = np.linspace(0.0, 100.0, 401)
    err = np.array([abs(fidelity_from_R(x) - overlap_fidelity(x)) for x in R])
    ok = float(err.max()) <= 1e-8
    verdict(10, ok, f"fidelity_from_R vs numerical overlap integral on R in [0,100]: max abs error {err.max():.2e}")

