import math

import numpy as np
import pytest

from toepspec.errors import LambdaSetError, OnCurveError, ShapeError
from toepspec.measures import (
    SpectralSample,
    circle_quadrature_logpot,
    dist_to_curve,
    empirical_logpot,
    energy_distance,
    limit_logpot_exp,
    limit_logpot_subexp,
    limit_logpot_unperturbed,
    match_cost,
    pushforward_sample,
    read_sample_csv,
    write_sample_csv,
)
from toepspec.symbol import parse_symbol, random_symbol

JORDAN = parse_symbol("-1:1")
TRIDIAG = parse_symbol("-1:1;1:1")
SHIFT = parse_symbol("1:1")


def sample(points):
    return SpectralSample(points=np.asarray(points, dtype=complex))


class TestEmpiricalLogpot:
    def test_single_point(self):
        assert empirical_logpot(sample([0]), math.e) == pytest.approx(1.0)

    def test_roots_of_unity_at_zero(self):
        pts = np.exp(2j * np.pi * np.arange(4) / 4)
        assert empirical_logpot(sample(pts), 0) == pytest.approx(0.0, abs=1e-14)

    def test_hit_is_minus_inf(self):
        assert empirical_logpot(sample([0]), 0) == -math.inf


class TestLimitSubexp:
    def test_jordan_outside(self):
        assert limit_logpot_subexp(JORDAN, 2.0) == pytest.approx(math.log(2), rel=1e-12)

    def test_jordan_inside(self):
        assert limit_logpot_subexp(JORDAN, 0.5) == pytest.approx(0.0, abs=1e-12)

    def test_tridiagonal_outside(self):
        expect = math.log((3 + math.sqrt(5)) / 2)
        assert limit_logpot_subexp(TRIDIAG, 3.0) == pytest.approx(expect, rel=1e-9)

    def test_on_curve_rejected(self):
        with pytest.raises(OnCurveError):
            limit_logpot_subexp(JORDAN, 1.0)

    def test_jensen_cross_check(self):
        rng = np.random.default_rng(70)
        checked = 0
        while checked < 50:
            sym = random_symbol(rng)
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            from toepspec.symbol import curve_samples

            if float(np.min(np.abs(curve_samples(sym, 1024) - z))) < 0.05:
                continue
            try:
                formula = limit_logpot_subexp(sym, z)
            except OnCurveError:
                continue
            quad = circle_quadrature_logpot(sym, z, 4096)
            assert formula == pytest.approx(quad, abs=1e-6)
            checked += 1


class TestLimitExp:
    def test_small_ellipse_interior_gives_log_r(self):
        # winding +1, both roots inside radius r
        sym = parse_symbol("-1:0.1;1:1")
        assert limit_logpot_exp(sym, 0.02 + 0.01j, 0.5) == pytest.approx(
            math.log(0.5), rel=1e-9
        )

    def test_straddling_band_gives_largest_root(self):
        sym = parse_symbol("-1:0.1;1:1")
        z = 0.8 + 0.05j
        from toepspec.symbol import root_profile

        prof = root_profile(sym, z)
        assert limit_logpot_exp(sym, z, 0.5) == pytest.approx(
            math.log(abs(prof.roots[0])), rel=1e-9
        )

    def test_negative_winding_deep_interior(self):
        # reversed orientation: two large roots, both beyond 1/r
        sym = parse_symbol("-1:5;1:1")
        z = 0.0 + 0.1j
        from toepspec.symbol import root_profile

        prof = root_profile(sym, z)
        expect = (
            math.log(abs(prof.roots[0]))
            + math.log(abs(prof.roots[1]))
            + math.log(0.5)
        )
        assert limit_logpot_exp(sym, z, 0.5) == pytest.approx(expect, rel=1e-9)

    def test_s0_matches_subexp(self):
        assert limit_logpot_exp(TRIDIAG, 3.0, 0.5) == pytest.approx(
            limit_logpot_subexp(TRIDIAG, 3.0), rel=1e-12
        )

    def test_jordan_cases(self):
        # annulus r < |z| < 1: potential of the uniform radius-r circle law
        assert limit_logpot_exp(JORDAN, 0.75, 0.5) == pytest.approx(math.log(0.75), rel=1e-9)
        # deep interior |z| < r
        assert limit_logpot_exp(JORDAN, 0.25, 0.5) == pytest.approx(math.log(0.5), rel=1e-9)

    def test_r_to_one_consistency(self):
        rng = np.random.default_rng(71)
        r = 1 - 1e-9
        checked = 0
        while checked < 20:
            sym = random_symbol(rng)
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            try:
                val_exp = limit_logpot_exp(sym, z, r)
                val_sub = limit_logpot_subexp(sym, z)
            except Exception:
                continue
            assert val_exp == pytest.approx(val_sub, abs=1e-6)
            checked += 1


class TestLimitUnperturbed:
    def test_triangular_dirac(self):
        # strictly one-sided band: the law is a point mass at a_0 = 0
        assert limit_logpot_unperturbed(SHIFT, 2.0) == pytest.approx(math.log(2), abs=1e-9)

    def test_tridiagonal_equals_subexp_here(self):
        assert limit_logpot_unperturbed(TRIDIAG, 3.0) == pytest.approx(
            limit_logpot_subexp(TRIDIAG, 3.0), abs=1e-8
        )

    def test_rho_invariance(self):
        from toepspec.symbol import root_profile

        z = 3.0 + 0.5j
        prof = root_profile(TRIDIAG, z)
        hi, lo = abs(prof.roots[0]), abs(prof.roots[1])
        base = limit_logpot_unperturbed(TRIDIAG, z)
        for frac in (0.25, 0.75):
            rho = lo * (hi / lo) ** frac
            alt = circle_quadrature_logpot(TRIDIAG, z, 4096, radius=rho)
            assert alt == pytest.approx(base, abs=1e-6)

    def test_support_set_rejected(self):
        # real z in [-2, 2] has both roots of equal modulus
        with pytest.raises(LambdaSetError):
            limit_logpot_unperturbed(TRIDIAG, 0.5)


class TestPushforward:
    def test_jordan_roots_of_unity(self):
        pts = pushforward_sample(JORDAN, 4).points
        assert sorted(np.round(pts, 12).tolist(), key=lambda c: (c.real, c.imag)) == sorted(
            [1, 1j, -1, -1j], key=lambda c: (c.real, c.imag)
        )

    def test_tridiagonal_points(self):
        pts = np.sort_complex(pushforward_sample(TRIDIAG, 4).points)
        np.testing.assert_allclose(pts, [-2, 0, 0, 2], atol=1e-12)

    def test_second_moment(self):
        pts = pushforward_sample(JORDAN, 64).points
        assert float(np.mean(np.abs(pts) ** 2)) == pytest.approx(1.0, rel=1e-12)

    def test_empirical_converges_to_limit(self):
        rng = np.random.default_rng(72)
        push = pushforward_sample(TRIDIAG, 4096)
        checked = 0
        while checked < 20:
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            try:
                lim = limit_logpot_subexp(TRIDIAG, z)
            except OnCurveError:
                continue
            from toepspec.symbol import curve_samples

            if float(np.min(np.abs(curve_samples(TRIDIAG, 512) - z))) < 0.05:
                continue
            emp = empirical_logpot(push, z)
            assert emp == pytest.approx(lim, abs=1e-3)
            checked += 1


class TestEnergyDistance:
    def test_identical_zero(self):
        rng = np.random.default_rng(73)
        pts = rng.standard_normal(20) + 1j * rng.standard_normal(20)
        assert energy_distance(sample(pts), sample(pts)) == pytest.approx(0.0, abs=1e-13)

    def test_point_masses(self):
        assert energy_distance(sample([0]), sample([0])) == 0.0
        assert energy_distance(sample([0]), sample([1])) == pytest.approx(2.0)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(74)
        pts = rng.standard_normal(15) + 1j * rng.standard_normal(15)
        other = rng.standard_normal(15) + 1j * rng.standard_normal(15)
        d1 = energy_distance(sample(pts), sample(other))
        d2 = energy_distance(sample(np.flip(pts)), sample(rng.permutation(other)))
        assert d1 == pytest.approx(d2, rel=1e-12)


class TestMatchCost:
    def test_permuted_targets_zero(self):
        rng = np.random.default_rng(75)
        pts = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        assert match_cost(np.flip(pts), pts, p=2) == pytest.approx(0.0, abs=1e-15)

    def test_single_pair(self):
        assert match_cost([0], [3], p=1) == pytest.approx(3.0)

    def test_forced_matching(self):
        h = 0.01
        for p in (1.0, 2.0):
            expect = (h**p / 2) ** (1 / p)
            assert match_cost([1, -1], [1 + h, -1], p=p) == pytest.approx(expect, rel=1e-12)

    def test_zero_iff_equal_multisets(self):
        rng = np.random.default_rng(76)
        pts = rng.standard_normal(10) + 1j * rng.standard_normal(10)
        assert match_cost(rng.permutation(pts), pts, p=1) == pytest.approx(0.0, abs=1e-15)
        shifted = pts.copy()
        shifted[3] += 0.5
        assert match_cost(shifted, pts, p=1) > 0.01

    def test_size_mismatch(self):
        with pytest.raises(ShapeError):
            match_cost([0, 1], [0], p=1)


class TestDistToCurve:
    def test_point_outside_circle(self):
        assert dist_to_curve([2.0], JORDAN, 1024)[0] == pytest.approx(1.0, abs=1e-9)

    def test_point_on_curve(self):
        d = dist_to_curve([np.exp(0.3j)], JORDAN, 1024)[0]
        assert d <= 2 * np.pi / 1024

    def test_point_on_tridiagonal_segment(self):
        assert dist_to_curve([0.0], TRIDIAG, 1024)[0] <= 1e-9


class TestCsvRoundtrip:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(77)
        pts = rng.standard_normal(9) + 1j * rng.standard_normal(9)
        s = SpectralSample(points=pts, meta={"symbol": "-1:1", "n": 9, "seed": 5})
        path = tmp_path / "sample.csv"
        write_sample_csv(s, path)
        back = read_sample_csv(path)
        np.testing.assert_array_equal(back.points, s.points)
        assert back.meta == s.meta
