"""Norm-layer tests: closed-form oracles and brute-force comparisons."""

import itertools

import numpy as np
import pytest

from zklab import (
    DispersionForm,
    ResolutionError,
    SpaceTimeField,
    UsageError,
    besov_norm_2_1,
    from_coefficients,
    lebesgue_norm,
    linear_propagator,
    make_field,
    make_grid,
    mixed_lebesgue_norm,
    pvariation_norm,
    sobolev_norm,
    twisted_variation,
    xsb_norm,
    y_half_proxy,
)

G = make_grid(16, 16, 2 * np.pi, 2 * np.pi)


def single_mode(g, jx, jy, amp=1.0):
    c = np.zeros((g.nx, g.ny), dtype=complex)
    c[jx, jy] = c[-jx, -jy] = 0.5 * amp
    return from_coefficients(g, c)


def free_trajectory(u0, form, span, frames):
    dt = span / (frames - 1)
    stack = [linear_propagator(u0, dt * i, form).coeffs for i in range(frames)]
    return SpaceTimeField(u0.grid, 0.0, dt, np.array(stack))


class TestSobolev:
    def test_cosine_closed_form(self):
        """||cos kx||_{H^s}^2 = area (1 + k^2)^s / 2 on the 2 pi box."""
        for k, s in ((1, 0.5), (3, 1.0), (2, -1.0)):
            u = single_mode(G, k, 0)
            expected = np.sqrt(G.area * (1.0 + k * k) ** s / 2.0)
            assert sobolev_norm(u, s) == pytest.approx(expected, rel=1e-12)

    def test_homogeneous_weight(self):
        u = single_mode(G, 2, 0)
        expected = np.sqrt(G.area * 4.0 / 2.0)  # |zeta|^2 = 4 at s = 1
        assert sobolev_norm(u, 1.0, homogeneous=True) == pytest.approx(expected, rel=1e-12)

    def test_homogeneous_negative_s_drops_zero_mode(self):
        c = np.zeros((G.nx, G.ny), dtype=complex)
        c[0, 0] = 3.0
        u = from_coefficients(G, c)
        assert sobolev_norm(u, -0.5, homogeneous=True) == 0.0

    def test_s_zero_is_l2(self):
        rng = np.random.default_rng(4)
        u = make_field(G, rng.standard_normal((G.nx, G.ny)))
        l2 = np.sqrt(np.sum(u.values ** 2) * G.cell_area)
        assert sobolev_norm(u, 0.0) == pytest.approx(l2, rel=1e-12)

    def test_out_of_range_s(self):
        with pytest.raises(UsageError):
            sobolev_norm(single_mode(G, 1, 0), 7.0)


class TestBesov:
    def test_single_shell_value(self):
        """Content at |zeta| = N exactly sits in shell N alone."""
        u = single_mode(G, 4, 0)
        l2 = sobolev_norm(u, 0.0)
        assert besov_norm_2_1(u, 0.5) == pytest.approx(2.0 * l2, rel=1e-12)

    def test_embedding_constant(self):
        # H^{1/2} <= B^{1/2}_{2,1} pointwise on any field
        rng = np.random.default_rng(12)
        for _ in range(5):
            u = make_field(G, rng.standard_normal((G.nx, G.ny)))
            assert sobolev_norm(u, 0.5) <= 1.6 * besov_norm_2_1(u, 0.5)


class TestLebesgue:
    def test_constant_field(self):
        u = make_field(G, np.full((G.nx, G.ny), 2.0))
        assert lebesgue_norm(u, 4.0) == pytest.approx(2.0 * G.area ** 0.25, rel=1e-12)
        assert lebesgue_norm(u, np.inf) == 2.0

    def test_r_below_one_rejected(self):
        with pytest.raises(UsageError):
            lebesgue_norm(make_field(G, np.zeros((16, 16))), 0.5)


class TestMixedLebesgue:
    def test_static_trajectory(self):
        """Constant-in-time field: L^q_t L^r_x = span^{1/q} ||f||_r."""
        u = single_mode(G, 1, 0)
        frames, span = 9, 2.0
        coeffs = np.repeat(u.coeffs[None], frames, axis=0)
        stf = SpaceTimeField(G, 0.0, span / (frames - 1), coeffs)
        got = mixed_lebesgue_norm(stf, 3.0, 2.0)
        assert got == pytest.approx(span ** (1 / 3) * sobolev_norm(u, 0.0), rel=1e-12)

    def test_sup_in_time(self):
        u = single_mode(G, 1, 0)
        coeffs = np.stack([u.coeffs, 2.0 * u.coeffs, 0.5 * u.coeffs])
        stf = SpaceTimeField(G, 0.0, 0.1, coeffs)
        assert mixed_lebesgue_norm(stf, np.inf, 2.0) == pytest.approx(
            2.0 * sobolev_norm(u, 0.0), rel=1e-12)

    def test_free_solution_l2_framewise_constant(self):
        traj = free_trajectory(single_mode(G, 2, 1), DispersionForm.ORIGINAL, 1.0, 17)
        got = mixed_lebesgue_norm(traj, np.inf, 2.0)
        assert got == pytest.approx(sobolev_norm(single_mode(G, 2, 1), 0.0), rel=1e-12)


class TestXsb:
    def test_s0_b0_is_windowed_l2(self):
        rng = np.random.default_rng(8)
        frames = 16
        fields = [make_field(G, rng.standard_normal((G.nx, G.ny))) for _ in range(frames)]
        stf = SpaceTimeField(G, 0.0, 0.05, np.array([f.coeffs for f in fields]))
        got = xsb_norm(stf, 0.0, 0.0, DispersionForm.ORIGINAL)
        w = stf.windowed()
        # direct periodic-rectangle space-time L2 of the windowed samples
        vals = np.abs(w.values()) ** 2
        direct = np.sqrt(np.sum(vals) * G.cell_area * stf.dt)
        assert got == pytest.approx(direct, rel=1e-10)

    def test_zero_input(self):
        stf = SpaceTimeField(G, 0.0, 0.1, np.zeros((8, G.nx, G.ny), dtype=complex))
        assert xsb_norm(stf, 0.5, 0.5, DispersionForm.ORIGINAL) == 0.0

    def test_needs_enough_frames(self):
        stf = SpaceTimeField(G, 0.0, 0.1, np.zeros((4, G.nx, G.ny), dtype=complex))
        with pytest.raises(ResolutionError):
            xsb_norm(stf, 0.0, 0.0, DispersionForm.ORIGINAL)

    def test_b_out_of_range(self):
        stf = SpaceTimeField(G, 0.0, 0.1, np.zeros((8, G.nx, G.ny), dtype=complex))
        with pytest.raises(UsageError):
            xsb_norm(stf, 0.0, 1.5, DispersionForm.ORIGINAL)

    def test_free_solution_concentrates_near_mu_zero(self):
        """For e^{tS}u0 the mass sits at tau = omega, so b-weighting at
        b = 1/2 stays within the window-bandwidth factor of the L2 value."""
        u0 = single_mode(G, 2, 1)
        traj = free_trajectory(u0, DispersionForm.ORIGINAL, 4.0, 64)
        base = xsb_norm(traj, 0.0, 0.0, DispersionForm.ORIGINAL)
        lifted = xsb_norm(traj, 0.0, 0.5, DispersionForm.ORIGINAL)
        traj2 = free_trajectory(u0, DispersionForm.ORIGINAL, 4.0, 128)
        lifted2 = xsb_norm(traj2, 0.0, 0.5, DispersionForm.ORIGINAL)
        assert lifted < 10.0 * base
        ratio = lifted2 / lifted
        assert 0.5 < ratio < 2.0


class TestPVariation:
    def exhaustive(self, vecs, p):
        k = len(vecs)
        best = 0.0
        for size in range(2, k + 1):
            for idx in itertools.combinations(range(k), size):
                total = sum(
                    np.linalg.norm(vecs[idx[i + 1]] - vecs[idx[i]]) ** p
                    for i in range(len(idx) - 1))
                best = max(best, total)
        return best ** (1.0 / p)

    @pytest.mark.parametrize("p", [1.0, 2.0, 3.5])
    def test_matches_exhaustive_search(self, p):
        rng = np.random.default_rng(17)
        for _ in range(25):
            k = rng.integers(2, 9)
            vecs = rng.standard_normal((k, 3))
            got = pvariation_norm(vecs, p)
            assert got == pytest.approx(self.exhaustive(vecs, p), rel=1e-12)

    def test_single_jump(self):
        vecs = np.array([[0.0], [0.0], [3.0], [3.0]])
        assert pvariation_norm(vecs, 2.0) == pytest.approx(3.0)

    def test_monotone_scalar_p1_is_total_variation(self):
        vecs = np.array([[0.0], [1.0], [2.5], [7.0]])
        assert pvariation_norm(vecs, 1.0) == pytest.approx(7.0)

    def test_decreasing_in_p(self):
        rng = np.random.default_rng(23)
        vecs = rng.standard_normal((10, 4))
        v1 = pvariation_norm(vecs, 1.0)
        v2 = pvariation_norm(vecs, 2.0)
        v4 = pvariation_norm(vecs, 4.0)
        assert v1 >= v2 >= v4

    def test_short_sequences(self):
        assert pvariation_norm(np.zeros((1, 5)), 2.0) == 0.0
        with pytest.raises(UsageError):
            pvariation_norm(np.zeros((3, 2)), 0.5)


class TestTwisted:
    def test_free_solution_gives_zero(self):
        u0 = single_mode(G, 2, 1) + single_mode(G, 1, 3, amp=0.3)
        for form in (DispersionForm.ORIGINAL, DispersionForm.SYMMETRIZED):
            traj = free_trajectory(u0, form, 1.0, 21)
            assert twisted_variation(traj, 2.0, form) < 1e-12

    def test_static_field_is_not_free(self):
        u0 = single_mode(G, 2, 1)
        coeffs = np.repeat(u0.coeffs[None], 9, axis=0)
        stf = SpaceTimeField(G, 0.0, 0.1, coeffs)
        assert twisted_variation(stf, 2.0, DispersionForm.ORIGINAL) > 0.1

    def test_distance_scale_matches_spatial_l2(self):
        u0 = single_mode(G, 2, 1)
        coeffs = np.stack([np.zeros_like(u0.coeffs), u0.coeffs])
        stf = SpaceTimeField(G, 0.0, 0.1, coeffs)
        got = twisted_variation(stf, 2.0, DispersionForm.ORIGINAL)
        assert got == pytest.approx(sobolev_norm(u0, 0.0), rel=1e-12)


class TestYHalfProxy:
    def test_single_shell_reduction(self):
        """Support at |zeta| = N exactly: proxy = sqrt(N) * twisted V^p."""
        u0 = single_mode(G, 4, 0)
        coeffs = np.stack([u0.coeffs, 0.5 * u0.coeffs, 1.5 * u0.coeffs])
        stf = SpaceTimeField(G, 0.0, 0.2, coeffs)
        form = DispersionForm.ORIGINAL
        expected = 2.0 * twisted_variation(stf, 2.0, form)
        assert y_half_proxy(stf, form) == pytest.approx(expected, rel=1e-12)

    def test_free_solution_zero(self):
        traj = free_trajectory(single_mode(G, 3, 2), DispersionForm.SYMMETRIZED, 0.5, 9)
        assert y_half_proxy(traj, DispersionForm.SYMMETRIZED) < 1e-11
