import math

import numpy as np
import pytest

from tmsreadout import DomainError, FitError
from tmsreadout.calibration import (
    NoisePowerPoints,
    fit_noise_vs_gain,
    model_noise_photons,
    model_noise_power,
    noise_rise,
    noise_rise_photons,
    read_noise_csv,
    snr_improvement,
    snr_improvement_limit,
    thermal_occupancy,
    write_noise_csv,
)
from tmsreadout.constants import HBAR, K_B, TWO_PI
from tmsreadout.fixtures import CHAIN_REFERENCE, resolve_path, synthetic_calibration

W_A = TWO_PI * 7.2284e9
GAINS = 10 ** (np.arange(0, 20.01, 0.5) / 10)


def test_model_photons():
    assert model_noise_photons(1.0, 0.0) == 0.5
    assert model_noise_photons(10.0, 28.2) == pytest.approx(37.7)
    g = np.array([2.0, 3.0, 7.5])
    assert np.allclose(np.diff(model_noise_photons(g, 4.0)) / np.diff(g), 1.0)
    with pytest.raises(DomainError):
        model_noise_photons(0.5, 1.0)


@pytest.mark.parametrize("mode", ["a", "b"])
def test_noiseless_round_trip(mode):
    G_sys, N_sys, f = CHAIN_REFERENCE[mode]
    fit = fit_noise_vs_gain(synthetic_calibration(mode, rel_noise=0.0), TWO_PI * f, 1e-6)
    assert fit.G_sys == pytest.approx(G_sys, rel=1e-3)
    assert fit.N_sys == pytest.approx(N_sys, rel=1e-3)
    assert fit.fit_rms < 1e-9 * fit.P_0


@pytest.mark.parametrize("mode,T", [("a", 9.8), ("b", 6.2)])
def test_noisy_round_trip(mode, T):
    G_sys, N_sys, f = CHAIN_REFERENCE[mode]
    fit = fit_noise_vs_gain(synthetic_calibration(mode), TWO_PI * f, 1e-6)
    assert fit.G_sys == pytest.approx(G_sys, rel=0.1)
    assert fit.N_sys == pytest.approx(N_sys, rel=0.1)
    assert fit.T_sys == pytest.approx(T, rel=0.02)


def test_photon_kind_matches_power():
    pts = synthetic_calibration("a", rel_noise=0.0)
    unit = HBAR * W_A / 1e-6
    as_photons = NoisePowerPoints(pts.G, pts.value / unit, "photons")
    a = fit_noise_vs_gain(pts, W_A, 1e-6)
    b = fit_noise_vs_gain(as_photons, W_A, 1e-6)
    assert b.G_sys == pytest.approx(a.G_sys, rel=1e-10)
    assert b.N_sys == pytest.approx(a.N_sys, rel=1e-10)
    assert np.allclose(b.model(pts.G, "photons"), as_photons.value, rtol=1e-10)


def test_zero_noise_clamped():
    P = model_noise_power(GAINS, 1e6, 0.0, W_A, 1e-6) * (1 + 1e-3 * np.sin(np.arange(GAINS.size)))
    fit = fit_noise_vs_gain(NoisePowerPoints(GAINS, P), W_A, 1e-6)
    assert 0.0 <= fit.N_sys < 0.05


def test_degenerate_designs():
    with pytest.raises(FitError):
        fit_noise_vs_gain(NoisePowerPoints([2.0, 2.0, 2.0], [1.0, 1.0, 1.0]), W_A, 1e-6)
    with pytest.raises(FitError):
        fit_noise_vs_gain(NoisePowerPoints([1.0, 2.0], [1.0, 2.0]), W_A, 1e-6)
    with pytest.raises(FitError):
        fit_noise_vs_gain(NoisePowerPoints([1.0, 1.2, 1.4], [1.0, 2.0, 3.0]), W_A, 1e-6)
    with pytest.raises(FitError):
        fit_noise_vs_gain(NoisePowerPoints([1.0, 5.0, 10.0], [3.0, 2.0, 1.0]), W_A, 1e-6)


def test_points_validation():
    with pytest.raises(DomainError):
        NoisePowerPoints([1.0], [1.0], "volts")
    with pytest.raises(DomainError):
        NoisePowerPoints([1.0, 2.0], [1.0])


class TestNoiseRise:
    def test_unity(self):
        assert noise_rise(1.0, 28.2, W_A) == pytest.approx(1.0, rel=1e-14)

    def test_example(self):
        assert noise_rise_photons(10.0, 28.2) == pytest.approx(37.7 / 28.7, rel=1e-14)
        assert noise_rise_photons(10.0, 28.2) == pytest.approx(1.3136, abs=1e-4)

    def test_frequency_cancels(self):
        g = np.linspace(1, 100, 50)
        a = noise_rise(g, 13.4, W_A)
        b = noise_rise(g, 13.4, TWO_PI * 9.7056e9)
        assert np.allclose(a, b, rtol=1e-12)
        assert np.allclose(a, noise_rise_photons(g, 13.4), rtol=1e-12)


class TestSNRImprovement:
    def test_unity(self):
        assert snr_improvement(1.0, 28.2, W_A) == pytest.approx(1.0, rel=1e-14)

    def test_monotone(self):
        g = np.logspace(0, 6, 200)
        assert np.all(np.diff(snr_improvement(g, 28.2, W_A)) > 0)

    def test_limit(self):
        assert snr_improvement(1e9, 28.2, W_A) == pytest.approx(snr_improvement_limit(28.2, W_A), rel=1e-6)
        assert snr_improvement_limit(28.2, W_A) == pytest.approx(28.7, rel=1e-12)

    def test_product_identity(self):
        g = np.linspace(1, 50, 30)
        assert np.allclose(snr_improvement(g, 5.0, W_A) * noise_rise(g, 5.0, W_A), g, rtol=1e-12)


def test_cold_limit():
    assert thermal_occupancy(W_A, 0.010) == pytest.approx(0.5, abs=1e-6)
    hot = thermal_occupancy(W_A, 300.0)
    assert hot == pytest.approx(K_B * 300 / (HBAR * W_A), rel=1e-3)


class TestCSV:
    def test_round_trip(self, tmp_path):
        pts = synthetic_calibration("b")
        write_noise_csv(tmp_path / "n.csv", pts)
        back = read_noise_csv(tmp_path / "n.csv")
        assert back.kind == "power"
        assert np.allclose(back.G, pts.G, rtol=1e-12)
        assert np.array_equal(back.value, pts.value)

    def test_mixed_kinds(self, tmp_path):
        (tmp_path / "m.csv").write_text("G_dB,value,kind\n0,1,power\n3,2,photons\n")
        with pytest.raises(DomainError):
            read_noise_csv(tmp_path / "m.csv")

    def test_missing_columns(self, tmp_path):
        (tmp_path / "m.csv").write_text("G_dB,value\n0,1\n")
        with pytest.raises(DomainError):
            read_noise_csv(tmp_path / "m.csv")

    def test_bundled_files(self):
        for mode in "ab":
            pts = read_noise_csv(resolve_path(f"@data/calibration_out_{mode}.csv"))
            assert pts.G.size == 41 and pts.kind == "power"
            assert 10 * math.log10(pts.G.max()) == pytest.approx(20.0)
