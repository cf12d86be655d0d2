import math
import warnings

import numpy as np
import pytest

from tmsreadout import DomainError, FitError
from tmsreadout.backaction import (
    ApproximationWarning,
    dephasing_rate,
    fit_isolation,
    gamma_c,
    gamma_c_from_hz,
    nth_from_dephasing,
    nth_model,
    nth_model_small,
    read_coherence_csv,
    t2e_from_dephasing,
)
from tmsreadout.fixtures import resolve_path, synthetic_coherence

L18 = 10 ** -1.8


class TestDephasing:
    def test_t1_limited(self):
        assert dephasing_rate(75e-6, 150e-6) == 0.0

    def test_table_values(self):
        g = dephasing_rate(75e-6, 52e-6)
        assert g == pytest.approx(1 / 52e-6 - 1 / 150e-6, rel=1e-14)
        assert g == pytest.approx(1.256e4, rel=1e-3)
        assert 1 / g == pytest.approx(79.6e-6, rel=1e-3)

    def test_halving(self):
        assert dephasing_rate(1.0, 26e-6) > 2 * dephasing_rate(1.0, 52e-6)

    def test_unphysical(self):
        with pytest.raises(DomainError):
            dephasing_rate(10e-6, 30e-6)
        with pytest.raises(DomainError):
            dephasing_rate(0.0, 1e-6)

    def test_reconstruction(self):
        for gphi in (0.0, 1e3, 3.3e4):
            assert dephasing_rate(75e-6, t2e_from_dephasing(75e-6, gphi)) == pytest.approx(gphi, abs=1e-9)


class TestGammaC:
    def test_symmetric(self):
        assert gamma_c(5.0, 5.0) == 2.5

    def test_table(self):
        gc = gamma_c_from_hz(1.91e6, 0.94e6)
        k, c = 2 * math.pi * 1.91e6, 2 * math.pi * 0.94e6
        assert gc == pytest.approx(k * c**2 / (k**2 + c**2), rel=1e-12)
        assert gc == pytest.approx(2.340e6, rel=1e-3)
        assert gc / (2 * math.pi) == pytest.approx(0.3724e6, rel=1e-3)

    def test_bounds_and_limit(self):
        for k, c in ((1.0, 0.2), (1.0, 5.0), (3.0, 3.0)):
            assert gamma_c(k, c) < k and gamma_c(k, c) <= c
        assert gamma_c(1e4, 1.0) == pytest.approx(1.0 / 1e4, rel=1e-6)

    def test_invalid(self):
        with pytest.raises(DomainError):
            gamma_c(0.0, 1.0)


class TestNth:
    def test_zero(self):
        assert nth_from_dephasing(0.0, 2.34e6) == 0.0

    def test_example(self):
        assert nth_from_dephasing(1.256e4, 2.340e6) == pytest.approx(0.00537, abs=1e-5)

    def test_warning(self):
        with pytest.warns(ApproximationWarning):
            nth_from_dephasing(1e6, 2e6)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            nth_from_dephasing(1e3, 2e6)

    def test_model_unity_gain(self):
        assert nth_model_small(1.0, L18, 0.004) == pytest.approx(0.004, rel=1e-14)
        assert nth_model(1.0, L18, 0.004, 0.0) == pytest.approx(0.004 * (1 + L18), rel=1e-12)

    def test_full_reduces_to_small(self):
        g = np.linspace(1, 4, 7)
        full = nth_model(g, L18, 1e-6, 1e-6)
        small = nth_model_small(g, L18, 1e-6)
        assert np.allclose(full, small, atol=L18 * 3e-6)

    def test_large_isolation_warns(self):
        with pytest.warns(ApproximationWarning):
            nth_model(2.0, 0.5, 0.0, 0.0)


class TestFit:
    def test_noiseless_exact(self):
        g = 10 ** (np.arange(0, 6.01, 0.5) / 10)
        fit = fit_isolation(g, nth_model_small(g, L18, 0.0054))
        assert fit.L == pytest.approx(L18, rel=1e-10)
        assert fit.nth_a == pytest.approx(0.0054, rel=1e-10)
        assert fit.L_dB == pytest.approx(-18.0, abs=1e-9)

    def test_synthetic_noisy(self):
        G, T1, T2E = synthetic_coherence()
        gc = gamma_c_from_hz(1.91e6, 0.94e6)
        fit = fit_isolation(G, nth_from_dephasing(dephasing_rate(T1, T2E), gc))
        assert fit.L_dB == pytest.approx(-18.0, abs=0.2)

    def test_degenerate(self):
        with pytest.raises(FitError):
            fit_isolation([2.0, 2.0, 2.0], [0.1, 0.2, 0.3])
        with pytest.raises(FitError):
            fit_isolation([1.0], [0.1])

    def test_negative_slope(self):
        with pytest.raises(FitError) as info:
            fit_isolation([1.0, 2.0, 3.0], [0.03, 0.02, 0.01])
        assert info.value.best is not None


class TestCSV:
    def test_bundled(self):
        t = read_coherence_csv(resolve_path("@data/backaction_coherence.csv"))
        assert t.G.size == 13 and t.T1 is not None

    def test_nbar_columns(self, tmp_path):
        (tmp_path / "n.csv").write_text("G_dB,nbar_th\n0,0.005\n3,0.02\n")
        t = read_coherence_csv(tmp_path / "n.csv")
        assert np.allclose(t.thermal_population(1.0), [0.005, 0.02])

    def test_bad_columns(self, tmp_path):
        (tmp_path / "n.csv").write_text("G_dB,foo\n0,1\n")
        with pytest.raises(DomainError):
            read_coherence_csv(tmp_path / "n.csv")
