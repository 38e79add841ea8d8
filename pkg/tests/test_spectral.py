import json
import math

import numpy as np
import pytest

from hopwalk.isoperimetry import IsoProfile, cheeger_exact
from hopwalk.pointprocess import InvalidParameterError, PointSet, sample_poisson
from hopwalk.spectral import (
    DisconnectedStateSpaceError,
    ProfileCoverageError,
    SizeLimitError,
    SpectralProfile,
    heat_kernel,
    mixing_bound_profile_integral,
    mixing_bound_simple,
    mixing_time_exact,
    spectral_gap,
    spectral_profile_exact,
    spectral_report,
)
from hopwalk.walk import build_generator

import oracles
from conftest import two_point_set


def far_clusters_instance():
    """Two tight clusters far apart: reducible once rates are truncated."""
    pts = [[0.0], [1.0], [100.0], [101.0]]
    xi = PointSet(dim=1, side=210, points=pts, seed=0)
    return build_generator(xi, 1.0, 1, cutoff=1e-6)


class TestSpectralGap:
    def test_two_state_closed_form(self):
        gen = build_generator(two_point_set(1.0), 1.0, 1)
        lam, vec = spectral_gap(gen)
        assert lam == pytest.approx(2 * math.exp(-1), rel=1e-12)
        assert vec[0] * vec[1] < 0  # eigenvector separates the two states

    def test_square_corner_residual(self):
        pts = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]
        xi = PointSet(dim=2, side=4, points=pts, seed=0)
        gen = build_generator(xi, 1.0, 1)
        lam, vec = spectral_gap(gen)
        u = vec * np.sqrt(gen.weights)
        a = gen.symmetrized()
        resid = np.linalg.norm(a @ u - lam * u) / np.linalg.norm(u)
        assert resid <= 1e-8

    def test_dense_and_iterative_agree(self):
        xi = sample_poisson(1.0, 2, 17.0, 0)  # around 300 points
        gen = build_generator(xi, 1.0, 2)
        lam_dense, _ = spectral_gap(gen, method="dense")
        lam_iter, _ = spectral_gap(gen, method="iterative")
        assert lam_iter == pytest.approx(lam_dense, rel=1e-8)

    def test_iterative_is_pure_function_of_input(self):
        # the preconditioner setup must not leak global RNG state into
        # the result: identical inputs give bit-identical eigenvalues
        xi = sample_poisson(1.0, 2, 17.0, 0)
        gen = build_generator(xi, 1.0, 1)
        a, _ = spectral_gap(gen, method="iterative")
        np.random.random(1000)  # perturb the global RNG state
        b, _ = spectral_gap(gen, method="iterative")
        assert a == b

    def test_disconnected_raises_with_components(self):
        gen = far_clusters_instance()
        with pytest.raises(DisconnectedStateSpaceError) as err:
            spectral_gap(gen)
        assert "[0, 1]" in str(err.value)
        assert "[2, 3]" in str(err.value)

    def test_degenerate_sentinel(self):
        xi = PointSet(dim=2, side=2, points=[[0.0, 0.0]], seed=0)
        gen = build_generator(xi, 1.0, 1)
        lam, _ = spectral_gap(gen)
        assert math.isinf(lam)

    def test_unknown_method(self):
        gen = build_generator(two_point_set(), 1.0, 1)
        with pytest.raises(InvalidParameterError):
            spectral_gap(gen, method="magic")


class TestSpectralProfile:
    def test_top_value_is_gap(self, small_instances):
        for _xi, gens in small_instances[:4]:
            for gen in gens.values():
                prof = spectral_profile_exact(gen)
                lam, _ = spectral_gap(gen)
                assert prof.breakpoints[-1] == pytest.approx(1.0, abs=1e-12)
                assert prof(1.0) == pytest.approx(lam, rel=1e-9)

    def test_nonincreasing(self, small_instances):
        for _xi, gens in small_instances[:4]:
            for gen in gens.values():
                prof = spectral_profile_exact(gen)
                vals = prof.values
                assert all(a >= b - 1e-15 for a, b in zip(vals, vals[1:]))

    def test_lookup_is_right_continuous(self):
        prof = SpectralProfile(breakpoints=(0.25, 0.5, 1.0),
                               values=(3.0, 2.0, 1.0))
        assert prof(0.25) == 3.0
        assert prof(0.49) == 3.0
        assert prof(0.5) == 2.0
        assert prof(1.0) == 1.0
        with pytest.raises(InvalidParameterError):
            prof(0.1)

    def test_matches_brute_force(self, small_instances):
        for _xi, gens in small_instances[:2]:
            for model in (2, 3):
                gen = gens[model]
                prof = spectral_profile_exact(gen)
                lam, _ = spectral_gap(gen)
                breaks, vals = oracles.brute_spectral_profile_function(gen, lam)
                np.testing.assert_allclose(prof.breakpoints, breaks,
                                           rtol=1e-12)
                np.testing.assert_allclose(prof.values, vals, rtol=1e-10)

    def test_size_limit(self):
        xi = sample_poisson(1.0, 2, 5.5, 8)
        assert len(xi) > 18
        gen = build_generator(xi, 1.0, 1)
        with pytest.raises(SizeLimitError):
            spectral_profile_exact(gen)


class TestHeatKernel:
    def test_time_zero_identity(self, small_instances):
        _xi, gens = small_instances[0]
        h = heat_kernel(gens[1], 0.0)
        np.testing.assert_allclose(h, np.eye(gens[1].n), atol=1e-12)

    def test_two_state_closed_form(self):
        gen = build_generator(two_point_set(1.0), 1.0, 1)
        w = math.exp(-1.0)
        for t in (0.3, 1.0, 4.0):
            h = heat_kernel(gen, t)
            assert h[0, 0] == pytest.approx(0.5 * (1 + math.exp(-2 * w * t)),
                                            rel=1e-12)

    def test_methods_agree(self, small_instances):
        for _xi, gens in small_instances[:3]:
            for gen in gens.values():
                a = heat_kernel(gen, 0.7, method="spectral")
                b = heat_kernel(gen, 0.7, method="expm")
                np.testing.assert_allclose(a, b, atol=1e-10)

    def test_stochastic_and_detailed_balance(self, small_instances):
        for _xi, gens in small_instances[:3]:
            for gen in gens.values():
                h = heat_kernel(gen, 1.3)
                np.testing.assert_allclose(h.sum(axis=1), 1.0, atol=1e-10)
                assert h.min() > -1e-12
                balance = gen.nu[:, None] * h
                np.testing.assert_allclose(balance, balance.T, atol=1e-10)

    def test_long_time_limit(self):
        gen = build_generator(two_point_set(0.5), 1.0, 2)
        lam, _ = spectral_gap(gen)
        h = heat_kernel(gen, 100.0 / lam)
        for row in h:
            assert 0.5 * np.abs(row - gen.nu).sum() < 1e-8

    def test_validation(self, small_instances):
        _xi, gens = small_instances[0]
        with pytest.raises(InvalidParameterError):
            heat_kernel(gens[1], -1.0)
        with pytest.raises(InvalidParameterError):
            heat_kernel(gens[1], 1.0, method="magic")
        with pytest.raises(SizeLimitError):
            heat_kernel(gens[1], 1.0, dense_limit=2)


class TestMixingTime:
    def test_two_state_closed_form(self):
        gen = build_generator(two_point_set(1.0), 1.0, 1)
        assert mixing_time_exact(gen) == pytest.approx(math.e / 2, rel=1e-5)

    def test_below_simple_bound(self, small_instances):
        for _xi, gens in small_instances:
            for gen in gens.values():
                lam, _ = spectral_gap(gen)
                tau = mixing_time_exact(gen)
                assert tau <= mixing_bound_simple(1 / lam, gen.nu_star) + 1e-9

    def test_gap_times_tau_lower_bound(self, small_instances):
        for _xi, gens in small_instances:
            for gen in gens.values():
                lam, _ = spectral_gap(gen)
                assert mixing_time_exact(gen) * lam >= 0.3

    def test_distance_monotone_on_grid(self):
        from hopwalk.spectral import _uniform_distance_fn

        gen = build_generator(sample_poisson(1.0, 2, 3.5, 2), 1.0, 2)
        dist = _uniform_distance_fn(gen)
        ts = np.linspace(0.01, 20.0, 50)
        ds = [dist(t) for t in ts]
        assert all(a >= b - 1e-12 for a, b in zip(ds, ds[1:]))


class TestProfileBound:
    def test_constant_iso_profile_closed_form(self):
        c, nu_star = 0.4, 0.01
        prof = IsoProfile(grid=(0.5, 1.0), values=(c, c), kind="model2")
        bound = mixing_bound_profile_integral(prof, nu_star, cheeger=c)
        expected = (4.0 / c ** 2) * math.log(4 * math.e / (4 * nu_star))
        assert bound == pytest.approx(expected, rel=1e-12)

    def test_spectral_bound_dominates_tau(self, small_instances):
        for _xi, gens in small_instances[:6]:
            for model in (2, 3):
                gen = gens[model]
                prof = spectral_profile_exact(gen)
                phi, _ = cheeger_exact(gen)
                bound = mixing_bound_profile_integral(prof, gen.nu_star, phi)
                assert mixing_time_exact(gen) <= bound + 1e-9

    def test_spectral_extension_requires_cheeger(self):
        prof = SpectralProfile(breakpoints=(0.1, 0.5), values=(2.0, 1.0))
        with pytest.raises(ProfileCoverageError):
            mixing_bound_profile_integral(prof, 0.05, cheeger=None)

    def test_spectral_coverage_error(self):
        prof = SpectralProfile(breakpoints=(0.9, 1.0), values=(2.0, 1.0))
        with pytest.raises(ProfileCoverageError):
            mixing_bound_profile_integral(prof, 0.001, cheeger=1.0)

    def test_iso_profile_needs_half(self):
        prof = IsoProfile(grid=(0.25,), values=(1.0,), kind="model2")
        with pytest.raises(ProfileCoverageError):
            mixing_bound_profile_integral(prof, 0.01)

    def test_diffusive_shape_scaling(self):
        # step approximation of phibar(t) = min(L^{-1/2}, t^{-1/2} L^{-1})
        # with Cheeger extension 1/L: the bound must stay O(L^2)
        ratios = []
        for L in (1e2, 1e3, 1e4):
            nu_star = 1.0 / L ** 2
            grid = np.geomspace(4 * nu_star, 1.0, 600)
            vals = tuple(min(L ** -0.5, t ** -0.5 / L) for t in grid)
            prof = IsoProfile(grid=tuple(grid), values=vals, kind="model1")
            bound = mixing_bound_profile_integral(prof, nu_star,
                                                  cheeger=1.0 / L)
            ratios.append(bound / L ** 2)
        assert max(ratios) < 25.0
        assert max(ratios) / min(ratios) < 2.0


class TestSpectralReport:
    def test_json_and_csv(self, small_instances):
        _xi, gens = small_instances[0]
        gen = gens[2]
        prof = spectral_profile_exact(gen)
        phi, _ = cheeger_exact(gen)
        rep = spectral_report(gen, profile=prof, cheeger=phi)
        data = json.loads(rep.to_json())
        assert data["model"] == 2
        assert data["method"] == "dense"
        assert rep.tau_exact <= rep.bound_simple + 1e-9
        assert rep.tau_exact <= rep.bound_profile + 1e-9
        row = rep.to_csv_row()
        assert len(row.split(",")) == len(rep.CSV_HEADER.split(","))

    def test_large_instance_skips_tau(self):
        xi = sample_poisson(1.0, 2, 6.0, 0)
        gen = build_generator(xi, 1.0, 1)
        rep = spectral_report(gen, dense_limit=10)
        assert rep.tau_exact is None
        assert rep.method == "iterative"
