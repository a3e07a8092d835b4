import numpy as np
import pytest

import pencillab as pl
from pencillab.generators import random_doubly_commuting_pair, random_singular_pencil

from conftest import complex_matrix


class TestJnrSample:
    def test_identity_pair(self):
        points = pl.jnr_sample(np.eye(2), np.eye(2), 10, seed=1)
        for z1, z2 in points:
            assert abs(z1 - 1.0) < 1e-12 and abs(z2 - 1.0) < 1e-12

    def test_proportional_pair(self):
        a = np.diag([1.0, -1.0])
        points = pl.jnr_sample(a, 2.0 * a, 25, seed=2)
        for z1, z2 in points:
            assert abs(z2 - 2.0 * z1) < 1e-12

    def test_empty(self):
        assert pl.jnr_sample(np.eye(2), np.eye(2), 0, seed=3) == []

    def test_deterministic(self):
        p1 = pl.jnr_sample(np.eye(3), np.ones((3, 3)), 5, seed=9)
        p2 = pl.jnr_sample(np.eye(3), np.ones((3, 3)), 5, seed=9)
        assert p1 == p2


class TestIsotropicSearch:
    def test_fixture_high_accuracy(self):
        a, b = np.diag([1.0, -1.0]), np.diag([2.0, -2.0])
        cert = pl.isotropic_search(a, b, restarts=50)
        assert cert is not None
        assert cert.method == "random-search"
        assert cert.residual_a < 1e-10 and cert.residual_b < 1e-10
        assert cert.is_valid(a, b)

    def test_no_false_positive_for_identity(self):
        cert = pl.isotropic_search(np.eye(3), np.eye(3), restarts=40)
        assert cert is None

    def test_residuals_recomputed(self):
        a, b = np.diag([1.0, -1.0]), np.diag([2.0, -2.0])
        cert = pl.isotropic_search(a, b, restarts=50)
        x = cert.vector
        assert abs(abs(x.conj() @ a @ x) - cert.residual_a) < 1e-14


class TestIsotropicFromSingular:
    def test_zero_pencil(self):
        p = pl.Pencil(np.zeros((2, 2)), np.zeros((2, 2)))
        cert = pl.isotropic_from_singular(p)
        assert cert.method == "kernel"
        assert cert.residual_a == 0.0 and cert.residual_b == 0.0

    def test_one_by_one(self):
        p = pl.assemble(pl.KroneckerStructure(row_minimal=[(0, 1)], col_minimal=[(0, 1)]))
        cert = pl.isotropic_from_singular(p)
        np.testing.assert_allclose(np.abs(cert.vector), [1.0])

    def test_l1_pair_scrambled_constructive(self):
        s = pl.KroneckerStructure(col_minimal=[(1, 1)], row_minimal=[(1, 1)])
        p, _ = pl.scramble(pl.assemble(s), seed=17)
        cert = pl.isotropic_from_singular(p)
        assert cert.is_valid(p.a, p.b)
        assert cert.method in ("kronecker-constructive", "random-search")
        # no common kernel here, so the kernel path must not have fired
        assert cert.method != "kernel"

    def test_rejects_nonsingular(self):
        p = pl.Pencil(np.diag([1.0, -1.0]), np.diag([2.0, -2.0]))
        with pytest.raises(pl.NotSingular):
            pl.isotropic_from_singular(p)

    def test_chain_on_corpus(self, rng, tol):
        for i in range(15):
            p, _ = random_singular_pencil(rng, max_size=9)
            cert = pl.isotropic_from_singular(p, tol)
            assert cert.is_valid(p.a, p.b)
            assert pl.pencil_nr_is_plane(p.a, p.b, tol)


class TestConvHull:
    def test_identity_outside(self):
        res = pl.conv_hull_membership(np.eye(2), np.eye(2))
        assert res.verdict == "outside"
        assert res.certificate is not None
        assert 0.9 <= res.certificate.margin <= 1.5
        assert res.certificate.is_valid(np.eye(2), np.eye(2))

    def test_fixture_inside(self):
        res = pl.conv_hull_membership(np.diag([1.0, -1.0]), np.diag([2.0, -2.0]))
        assert res.verdict == "inside"

    def test_nilpotent_inside(self):
        a = np.array([[0.0, 1.0], [0.0, 0.0]])
        res = pl.conv_hull_membership(a, np.zeros((2, 2)))
        assert res.verdict in ("inside", "boundary")

    def test_sample_consistency(self, rng):
        # outside verdicts must dominate every sampled range point
        a = np.eye(3) + 0.1 * complex_matrix(rng, 3, 3)
        b = np.eye(3) + 0.1 * complex_matrix(rng, 3, 3)
        res = pl.conv_hull_membership(a, b)
        if res.verdict == "outside":
            u = res.certificate.direction
            for z1, z2 in pl.jnr_sample(a, b, 200, seed=4):
                value = u[0] * z1.real + u[1] * z1.imag + u[2] * z2.real + u[3] * z2.imag
                assert value >= res.certificate.margin - 1e-8


class TestPencilNrPlane:
    def test_identity_false(self):
        assert not pl.pencil_nr_is_plane(np.eye(2), np.eye(2))

    def test_fixture_true(self):
        assert pl.pencil_nr_is_plane(np.diag([1.0, -1.0]), np.diag([2.0, -2.0]))

    def test_zero_true(self):
        assert pl.pencil_nr_is_plane(np.zeros((2, 2)), np.zeros((2, 2)))


class TestNrContains:
    def test_identity_excludes_origin(self):
        p = pl.Pencil(np.eye(2), np.zeros((2, 2)))
        assert not pl.nr_contains(p, 0.7)

    def test_zero_pencil(self):
        p = pl.Pencil(np.zeros((2, 2)), np.zeros((2, 2)))
        assert pl.nr_contains(p, 1.23 + 0.5j)

    def test_fixture_at_half(self):
        p = pl.Pencil(np.diag([1.0, -1.0]), np.diag([2.0, -2.0]))
        assert pl.nr_contains(p, -0.5)

    def test_plane_range_contains_everywhere(self, tol):
        s = pl.KroneckerStructure(row_minimal=[(0, 1), (1, 1)], col_minimal=[(0, 1), (1, 1)])
        p, _ = pl.scramble(pl.assemble(s), seed=23)
        assert pl.pencil_nr_is_plane(p.a, p.b, tol)
        grid = np.linspace(-2, 2, 5)
        for re in grid:
            for im in grid:
                assert pl.nr_contains(p, complex(re, im), tol)


class TestDoublyCommuting:
    def test_normal_pair_detected(self, rng):
        a, b = random_doubly_commuting_pair(rng, 4)
        assert pl.is_doubly_commuting(a, b)

    def test_plain_commuting_not_necessarily(self):
        m = np.array([[0.0, 1.0], [0.0, 0.0]])
        a = m
        b = m @ m + m  # commutes with m but not with m*
        assert pl.check_commuting(a, b)
        assert not pl.is_doubly_commuting(a, np.eye(2) + a)

    def test_convexity_equivalence(self, rng, tol):
        # doubly commuting pairs: plane range holds exactly when a
        # certificate is findable by search
        for i in range(6):
            a, b = random_doubly_commuting_pair(rng, 3)
            if i % 2 == 0:
                # recenter on a sampled range point so the origin is inside
                z = (rng.standard_normal(3) + 1j * rng.standard_normal(3))
                z /= np.linalg.norm(z)
                a = a - (z.conj() @ a @ z) * np.eye(3)
                b = b - (z.conj() @ b @ z) * np.eye(3)
            assert pl.is_doubly_commuting(a, b)
            plane = pl.pencil_nr_is_plane(a, b, tol)
            cert = pl.isotropic_search(a, b, tol, restarts=2000)
            found = cert is not None and cert.is_valid(a, b)
            assert plane == found
