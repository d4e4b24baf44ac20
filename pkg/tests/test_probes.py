"""Probe-layer unit tests: argument validation, report structure, and the
deterministic cutoff decomposition.  Drift magnitudes on the frozen parameter
sets are exercised by the acceptance suite."""

import numpy as np
import pytest

from zklab import (
    ResolutionError,
    UsageError,
    bilinear_probe,
    cutoff_decompose,
    cutoff_probe,
    gh_bilinear_probe,
    l4_probe,
    make_grid,
    maximal_derivative_probe,
    strichartz_probe,
    trilinear_form_probe,
)

G = make_grid(32, 32, 2 * np.pi, 2 * np.pi)


class TestValidation:
    def test_strichartz_inadmissible_pair(self):
        # the scaling relation picks out 3/q + 2/r = 1; (4, 4) violates it
        with pytest.raises(UsageError):
            strichartz_probe(4.0, 4.0, G, samples=2)

    def test_bilinear_needs_separation(self):
        with pytest.raises(UsageError):
            bilinear_probe(16.0, 8.0, G, samples=2)  # wrong order
        with pytest.raises(UsageError):
            bilinear_probe(8.0, 8.0, G, samples=2)  # no octave gap

    def test_gh_needs_low_high(self):
        with pytest.raises(UsageError):
            gh_bilinear_probe(4.0, 8.0, G, samples=2)  # first shell must dominate

    def test_trilinear_regime_gate(self):
        with pytest.raises(UsageError):
            trilinear_form_probe(4.0, 4.0, 16.0, 0.1, G, samples=1)

    def test_shell_outside_band(self):
        with pytest.raises(Exception):
            bilinear_probe(4.0, 64.0, G, samples=2)


class TestReportShape:
    def test_strichartz_small_run(self):
        rep = strichartz_probe(6.0, 4.0, G, samples=4, seed=1, frames=17)
        assert rep.estimate.startswith("strichartz")
        assert rep.lhs > 0 and rep.rhs > 0
        assert rep.ratio == pytest.approx(rep.lhs / rep.rhs, rel=1e-12)
        lo, med, hi = rep.spread
        assert lo <= med <= hi
        assert rep.drift > 0
        assert rep.seed == 1

    def test_seed_determinism(self):
        a = strichartz_probe(6.0, 4.0, G, samples=3, seed=7, frames=17)
        b = strichartz_probe(6.0, 4.0, G, samples=3, seed=7, frames=17)
        assert a.lhs == b.lhs and a.drift == b.drift

    def test_maximal_probe_params(self):
        rep = maximal_derivative_probe(G, samples=3, seed=2, frames=17)
        assert "epsilon" in rep.params
        assert rep.caveat

    def test_l4_probe_runs(self):
        rep = l4_probe(G, samples=3, seed=0, frames=17)
        assert rep.ratio > 0

    def test_bilinear_companion_recorded(self):
        rep = bilinear_probe(2.0, 8.0, G, samples=3, seed=0, frames=17)
        assert rep.params["companion_n1"] in (1.0, 4.0)
        assert rep.params["companion_n2"] in (4.0, 16.0)


class TestCutoffDecomposition:
    TIMES = np.linspace(0.0, 4.0, 2048)

    def test_exact_reconstruction(self):
        dec = cutoff_decompose(1.0, 8.0, self.TIMES)
        np.testing.assert_allclose(dec.low + dec.high, dec.indicator, atol=1e-12)

    def test_indicator_support(self):
        dec = cutoff_decompose(1.0, 8.0, self.TIMES)
        inside = self.TIMES <= 1.0
        np.testing.assert_array_equal(dec.indicator[inside], 1.0)
        np.testing.assert_array_equal(dec.indicator[~inside], 0.0)

    def test_low_part_is_band_limited(self):
        dec = cutoff_decompose(1.0, 8.0, self.TIMES)
        dt = self.TIMES[1] - self.TIMES[0]
        tau = 2.0 * np.pi * np.fft.fftfreq(len(self.TIMES), d=dt)
        hat = np.fft.fft(dec.low)
        assert np.abs(hat[np.abs(tau) > 16.0]).max() < 1e-10 * np.abs(hat).max()

    def test_validation(self):
        with pytest.raises(UsageError):
            cutoff_decompose(0.0, 8.0, self.TIMES)
        with pytest.raises(UsageError):
            cutoff_decompose(1.0, 8.0, self.TIMES[:8])
        with pytest.raises(UsageError):
            cutoff_decompose(1.0, 8.0, np.sqrt(self.TIMES))
        with pytest.raises(ResolutionError):
            cutoff_decompose(3.0, 8.0, self.TIMES)  # span < 2T
        with pytest.raises(ResolutionError):
            cutoff_decompose(1.0, 1e5, self.TIMES)  # dt too coarse for L

    def test_probe_rows_and_drift(self):
        rows, rep = cutoff_probe((0.5, 1.0), (4.0, 8.0), num_nodes=1024)
        assert len(rows) == 4
        for row in rows:
            assert row["recon_error"] < 1e-12
            assert row["normalized"] > 0
        assert rep.drift >= 1.0
        assert rep.params["samples"] == 4
