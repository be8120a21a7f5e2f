import math

import numpy as np
import pytest

from helpers import ks_distance
from toepspec.errors import ShapeError
from toepspec.linalg import (
    LogDet,
    eigenvalues,
    eigenvector,
    lu_logdet,
    smallest_singular,
    svd,
)
from toepspec.matrixgen import circulant, corner, jordan, toeplitz
from toepspec.symbol import curve_samples, parse_symbol

TRIDIAG = parse_symbol("-1:1;1:1")


def random_complex(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


class TestLuLogdet:
    def test_identity(self):
        ld = lu_logdet(np.eye(5))
        assert ld.log_abs == pytest.approx(0.0, abs=1e-14)
        assert ld.phase == pytest.approx(1.0)

    def test_diagonal(self):
        ld = lu_logdet(np.diag([2.0, 3.0]))
        assert ld.log_abs == pytest.approx(math.log(6))
        assert ld.phase == pytest.approx(1.0)

    def test_nilpotent_is_singular(self):
        ld = lu_logdet(jordan(4))
        assert ld.log_abs == -math.inf
        assert ld.phase == 0

    def test_matches_slogdet_on_random(self):
        rng = np.random.default_rng(21)
        for n in (3, 10, 40):
            m = random_complex(rng, n)
            ld = lu_logdet(m)
            sign, logdet = np.linalg.slogdet(m)
            assert ld.log_abs == pytest.approx(logdet, rel=1e-10)
            assert ld.phase == pytest.approx(sign, abs=1e-10)

    def test_nonsquare_rejected(self):
        with pytest.raises(ShapeError):
            lu_logdet(np.ones((2, 3)))


class TestEigenvalues:
    def test_diagonal(self):
        eigs = eigenvalues(np.diag([1.0, 2.0j, -3.0]))
        assert sorted(eigs, key=lambda z: z.real) == pytest.approx([-3, 2j, 1])

    def test_companion_of_quadratic(self):
        # zeta^2 - 3 zeta + 1
        comp = np.array([[0, -1.0], [1, 3.0]], dtype=complex)
        eigs = np.sort(np.abs(eigenvalues(comp)))
        assert eigs == pytest.approx([0.3819660113, 2.6180339887], abs=1e-8)

    def test_corner_perturbed_jordan_radius(self):
        n, eps = 50, 1e-4
        eigs = eigenvalues(jordan(n) + corner(n, eps))
        np.testing.assert_allclose(np.abs(eigs), 10 ** (-4 / 50), atol=1e-8)

    def test_logdet_residual_against_lu(self):
        rng = np.random.default_rng(22)
        for n in (10, 60, 100):
            m = random_complex(rng, n)
            eigs = eigenvalues(m)
            for _ in range(20):
                mu = complex(rng.normal(), rng.normal()) * 2
                direct = lu_logdet(m - mu * np.eye(n)).log_abs
                from_eigs = float(np.sum(np.log(np.abs(eigs - mu))))
                assert from_eigs == pytest.approx(direct, rel=1e-6)


class TestSvd:
    def test_values_nondecreasing(self):
        res = svd(np.diag([3.0, 1e-2]))
        np.testing.assert_allclose(res.singular_values, [0.01, 3.0])

    def test_jordan_singular_values(self):
        res = svd(jordan(5))
        np.testing.assert_allclose(res.singular_values, [0, 1, 1, 1, 1], atol=1e-12)

    def test_circulant_all_ones(self):
        res = svd(circulant(parse_symbol("-1:1"), 6))
        np.testing.assert_allclose(res.singular_values, np.ones(6), atol=1e-12)

    def test_triplet_relations_and_unitarity(self):
        rng = np.random.default_rng(23)
        m = random_complex(rng, 25)
        res = svd(m, want_vectors=True)
        s, e, f = res.singular_values, res.right_vectors, res.left_vectors
        scale = np.linalg.norm(m, 2)
        assert np.max(np.abs(m @ e - f * s[None, :])) <= 1e-8 * scale
        assert np.max(np.abs(m.conj().T @ f - e * s[None, :])) <= 1e-8 * scale
        assert np.max(np.abs(e.conj().T @ e - np.eye(25))) <= 1e-8
        assert np.max(np.abs(f.conj().T @ f - np.eye(25))) <= 1e-8

    def test_hilbert_schmidt_consistency(self):
        rng = np.random.default_rng(24)
        for n in (5, 30):
            m = random_complex(rng, n)
            s = svd(m).singular_values
            assert float(np.sum(s**2)) == pytest.approx(
                float(np.linalg.norm(m) ** 2), rel=1e-8
            )


class TestSmallestSingular:
    def test_exactly_singular(self):
        assert smallest_singular(np.array([[1.0, 0], [0, 0]])) == 0.0

    def test_diagonal(self):
        assert smallest_singular(np.diag([5.0, 0.3])) == pytest.approx(0.3, rel=1e-8)

    def test_circulant_distance(self):
        c = circulant(parse_symbol("-1:1"), 8)
        z = 1.5
        smin = smallest_singular(z * np.eye(8) - c)
        roots = np.exp(2j * np.pi * np.arange(8) / 8)
        assert smin == pytest.approx(float(np.min(np.abs(z - roots))), rel=1e-10)

    def test_agrees_with_svd_on_random(self):
        rng = np.random.default_rng(25)
        for n in (3, 12, 40, 80):
            m = random_complex(rng, n)
            fast = smallest_singular(m)
            slow = float(svd(m).singular_values[0])
            assert fast == pytest.approx(slow, rel=1e-6, abs=1e-12)

    def test_near_singular(self):
        m = np.diag([1.0, 1e-13]).astype(complex)
        assert smallest_singular(m) == pytest.approx(1e-13, rel=1e-6)


class TestEigenvector:
    def test_diagonal(self):
        v = eigenvector(np.diag([2.0, 5.0]), 2.0)
        assert abs(v[0]) == pytest.approx(1.0)
        assert abs(v[1]) == pytest.approx(0.0, abs=1e-10)

    def test_corner_perturbed_jordan_geometric(self):
        n = 8
        m = jordan(n) + corner(n, 2.0**-n)
        lam = eigenvalues(m)
        lam0 = lam[np.argmin(np.abs(lam - 0.5))]
        v = eigenvector(m, lam0)
        # rows i: v_{i+1} = lam v_i, last row: eps v_1 = lam v_n
        assert np.linalg.norm(m @ v - lam0 * v) <= 1e-8
        ratios = v[1:] / v[:-1]
        np.testing.assert_allclose(ratios, lam0, rtol=1e-6)

    def test_circulant_fourier_vector(self):
        c = circulant(parse_symbol("-1:1"), 4)
        v = eigenvector(c, 1j)
        expect = np.array([1, 1j, -1, -1j]) / 2
        overlap = abs(np.vdot(v, expect))
        assert overlap == pytest.approx(1.0, abs=1e-8)


class TestAvramParter:
    def test_singular_value_law(self):
        # empirical singular values of the shifted tridiagonal matrix against
        # quadrature samples of |a(u) - z|
        n, z = 400, 3.0
        m = toeplitz(TRIDIAG, n) - z * np.eye(n)
        s = svd(m).singular_values
        theta = (np.arange(10_000) + 0.5) * 2 * np.pi / 10_000
        quad = np.abs(curve_samples(TRIDIAG, 10_000) - z)
        assert ks_distance(s, quad) <= 0.05
