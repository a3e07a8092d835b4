import numpy as np
import pytest

import pencillab as pl
from pencillab.generators import random_commuting_pair


def by_coords(points):
    return sorted(points, key=lambda p: (p[0].real, p[0].imag, p[1].real, p[1].imag))

from conftest import complex_matrix


class TestCheckCommuting:
    def test_diagonal_pairs(self):
        assert pl.check_commuting(np.diag([1.0, 2.0]), np.diag([3.0, 4.0]))

    def test_ladder_pair_fails(self):
        a = np.array([[0.0, 1.0], [0.0, 0.0]])
        b = np.array([[0.0, 0.0], [1.0, 0.0]])
        assert not pl.check_commuting(a, b)

    def test_polynomials_commute(self, rng):
        m = complex_matrix(rng, 5, 5)
        a = m @ m - 2.0 * m
        b = m @ m @ m + 0.25 * np.eye(5)
        assert pl.check_commuting(a, b)

    def test_zero_pair(self):
        assert pl.check_commuting(np.zeros((3, 3)), np.zeros((3, 3)))


class TestKoszulAt:
    def test_identity_zero_pair(self):
        res = pl.koszul_at(np.eye(3), np.zeros((3, 3)), 0.0, 0.0)
        assert res.exact and res.rank_d1 == 3 and res.rank_d2 == 3

    def test_zero_pair_not_exact(self):
        res = pl.koszul_at(np.zeros((2, 2)), np.zeros((2, 2)), 0.0, 0.0)
        assert not res.exact
        assert res.rank_d1 == 0 and res.rank_d2 == 0

    def test_fixture_at_member(self):
        a, b = np.diag([1.0, -1.0]), np.diag([2.0, -2.0])
        assert not pl.koszul_at(a, b, 1.0, 2.0).exact

    def test_rank_sum_bound(self, rng):
        for _ in range(10):
            a, b = random_commuting_pair(rng, max_n=6)
            z1, z2 = complex(rng.standard_normal()), complex(rng.standard_normal())
            res = pl.koszul_at(a, b, z1, z2)
            assert res.rank_d1 + res.rank_d2 <= 2 * res.dim

    def test_noncommuting_rejected(self):
        a = np.array([[0.0, 1.0], [0.0, 0.0]])
        b = np.array([[0.0, 0.0], [1.0, 0.0]])
        with pytest.raises(pl.NotCommuting):
            pl.koszul_at(a, b, 0.0, 0.0)


class TestTaylorSpectrum:
    def test_signed_diag(self):
        ts = pl.taylor_spectrum(np.diag([1.0, -1.0]), np.diag([2.0, -2.0]))
        got = by_coords(ts.points)
        assert len(got) == 2
        np.testing.assert_allclose(got[0], (-1.0, -2.0), atol=1e-10)
        np.testing.assert_allclose(got[1], (1.0, 2.0), atol=1e-10)

    def test_zero_pair(self):
        ts = pl.taylor_spectrum(np.zeros((3, 3)), np.zeros((3, 3)))
        assert ts.points == ((0.0, 0.0),)

    def test_swapped_diagonals(self):
        ts = pl.taylor_spectrum(np.diag([1.0, 2.0]), np.diag([2.0, 1.0]))
        np.testing.assert_allclose(by_coords(ts.points), [(1.0, 2.0), (2.0, 1.0)], atol=1e-10)

    def test_witness_residuals(self, rng):
        a, b = random_commuting_pair(rng, max_n=6, kind="poly")
        ts = pl.taylor_spectrum(a, b)
        assert ts.points  # nonempty for every commuting pair
        na, nb = np.linalg.norm(a), np.linalg.norm(b)
        for (ra, rb) in ts.residuals:
            assert ra <= 1e-8 * max(1.0, na)
            assert rb <= 1e-8 * max(1.0, nb)

    def test_nonempty_spectrum(self, rng):
        for _ in range(10):
            a, b = random_commuting_pair(rng, max_n=7)
            assert pl.taylor_spectrum(a, b).points


class TestSpectrumOracles:
    def test_via_singularity_agrees(self, rng):
        for _ in range(8):
            a, b = random_commuting_pair(rng, max_n=6)
            direct = pl.taylor_spectrum(a, b)
            oracle = pl.spectrum_via_singularity(a, b)
            equal, mismatches = pl.spectra_match(direct.points, oracle.points)
            assert equal, mismatches

    def test_pointwise_koszul_vs_singularity(self, rng, tol):
        a, b = random_commuting_pair(rng, max_n=5, kind="poly")
        n = a.shape[0]
        from pencillab.linalg import eigenvalues

        for z1 in eigenvalues(a, tol).values:
            for z2 in eigenvalues(b, tol).values:
                exact = pl.koszul_at(a, b, z1, z2, tol).exact
                shifted = pl.Pencil(a - z1 * np.eye(n), b - z2 * np.eye(n))
                assert exact == (not pl.is_singular(shifted, tol))

    def test_off_grid_points_exact(self, rng, tol):
        a, b = random_commuting_pair(rng, max_n=5)
        for _ in range(50):
            z1 = complex(rng.standard_normal(), rng.standard_normal()) * 3.0
            z2 = complex(rng.standard_normal(), rng.standard_normal()) * 3.0
            assert pl.koszul_at(a, b, z1, z2, tol).exact


class TestInvertibleCharacterization:
    def test_swapped_diagonals(self):
        ts = pl.spectrum_invertible_characterization(np.diag([1.0, 2.0]), np.diag([2.0, 1.0]))
        np.testing.assert_allclose(by_coords(ts.points), [(1.0, 2.0), (2.0, 1.0)], atol=1e-10)

    def test_repeated_first_coefficient(self):
        ts = pl.spectrum_invertible_characterization(np.diag([3.0, 3.0]), np.diag([2.0, 5.0]))
        np.testing.assert_allclose(by_coords(ts.points), [(3.0, 2.0), (3.0, 5.0)], atol=1e-10)

    def test_identity_pair(self):
        ts = pl.spectrum_invertible_characterization(np.eye(2), np.eye(2))
        np.testing.assert_allclose(ts.points, [(1.0, 1.0)], atol=1e-12)

    def test_rejects_singular_coefficient(self):
        with pytest.raises(pl.NotInvertible):
            pl.spectrum_invertible_characterization(np.diag([1.0, 0.0]), np.eye(2))

    def test_agrees_with_direct(self, rng):
        done = 0
        while done < 6:
            a, b = random_commuting_pair(rng, max_n=6)
            n = a.shape[0]
            if pl.numerical_rank(a) < n or pl.numerical_rank(b) < n:
                continue
            done += 1
            direct = pl.taylor_spectrum(a, b)
            ratio = pl.spectrum_invertible_characterization(a, b)
            equal, mismatches = pl.spectra_match(direct.points, ratio.points)
            assert equal, mismatches


class TestConditionMatrix:
    def test_signed_diag_fixture(self):
        report = pl.condition_matrix(np.diag([1.0, -1.0]), np.diag([2.0, -2.0]))
        assert report.zero_in_taylor is False
        assert report.pencil_singular is False
        assert report.origin_in_joint_range is True
        assert report.range_is_plane is True
        assert all(ok for _, ok in report.implications)

    def test_zero_pair_all_true(self):
        report = pl.condition_matrix(np.zeros((2, 2)), np.zeros((2, 2)))
        assert report.zero_in_taylor and report.pencil_singular
        assert report.origin_in_joint_range and report.range_is_plane

    def test_nilpotent_proportional_pair(self):
        # singular commuting pair with a shared kernel: all four conditions hold
        a = np.array([[0.0, 1.0], [0.0, 0.0]])
        report = pl.condition_matrix(a, 2.0 * a)
        assert report.zero_in_taylor and report.pencil_singular
        assert report.origin_in_joint_range and report.range_is_plane
        assert report.certificate is not None

    def test_noncommuting_rejected(self):
        s = pl.KroneckerStructure(row_minimal=[(0, 1), (1, 1)], col_minimal=[(0, 1), (1, 1)])
        p = pl.assemble(s)
        assert not pl.check_commuting(p.a, p.b)
        with pytest.raises(pl.NotCommuting):
            pl.condition_matrix(p.a, p.b)


class TestShiftPairs:
    def test_n1_values(self):
        a, b = pl.shift_truncation_pair(1)
        np.testing.assert_allclose(a, np.diag([1.0, 0.0]))
        np.testing.assert_allclose(b, np.diag([0.0, 1.0]))

    def test_n1_members(self):
        a, b = pl.shift_truncation_pair(1)
        ts = pl.taylor_spectrum(a, b)
        np.testing.assert_allclose(by_coords(ts.points), [(0.0, 1.0), (1.0, 0.0)], atol=1e-12)

    def test_n2_determinant_profile(self, tol):
        from pencillab.linalg import pencil_determinant_coefficients

        a, b = pl.shift_truncation_pair(2)
        p = pl.Pencil(a, b)
        coeffs = pencil_determinant_coefficients(p, tol) * p.norm_scale() ** 4
        np.testing.assert_allclose(coeffs, [0.0, 0.0, 1.0, 0.0, 0.0], atol=1e-10)

    def test_commuting_all_sizes(self):
        for n in range(1, 8):
            a, b = pl.shift_truncation_pair(n)
            assert pl.check_commuting(a, b)
            ia, ib = pl.invertible_shift_pair(n)
            assert pl.check_commuting(ia, ib)
            assert pl.numerical_rank(ia) == 2 * n and pl.numerical_rank(ib) == 2 * n
