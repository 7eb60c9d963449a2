"""Tests for the linear-algebra and sphere-metric kernel."""

import numpy as np
import pytest

from bilip import core
from bilip.errors import (
    DimensionMismatchError,
    InvalidMatrixError,
    InvalidPlaneError,
    OffSphereError,
)


class TestOperatorNorm:
    def test_identity_is_isometry(self):
        assert core.operator_norm(np.eye(3)) == pytest.approx(1.0, rel=1e-10)

    def test_diagonal_singular_values(self):
        assert core.operator_norm([[2.0, 0.0], [0.0, 0.5]]) == pytest.approx(
            2.0, rel=1e-10
        )

    def test_nilpotent_shear(self):
        # A^T A = diag(0, 4) by hand, so the largest singular value is 2
        assert core.operator_norm([[0.0, 2.0], [0.0, 0.0]]) == pytest.approx(
            2.0, rel=1e-10
        )

    def test_start_vector_on_null_direction(self):
        # the all-ones start is annihilated by this matrix exactly;
        # the fallback starts must still find sigma = 2
        assert core.operator_norm([[1.0, -1.0], [-1.0, 1.0]]) == pytest.approx(
            2.0, rel=1e-10
        )

    def test_zero_matrix(self):
        assert core.operator_norm(np.zeros((4, 4))) == 0.0

    def test_matches_svd_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(400):
            n = int(rng.integers(1, 9))
            m = rng.normal(size=(n, n))
            assert core.operator_norm(m) == pytest.approx(
                np.linalg.norm(m, 2), rel=1e-9
            )

    def test_rejects_bad_input(self):
        with pytest.raises(InvalidMatrixError):
            core.operator_norm(np.ones((2, 3)))
        with pytest.raises(InvalidMatrixError):
            core.operator_norm([[np.nan, 0.0], [0.0, 1.0]])
        with pytest.raises(InvalidMatrixError):
            core.operator_norm([[np.inf, 0.0], [0.0, 1.0]])


class TestFrobeniusNorm:
    def test_all_ones(self):
        assert core.frobenius_norm([[1.0, 1.0], [1.0, 1.0]]) == 2.0

    def test_identity_sqrt_n(self):
        assert core.frobenius_norm(np.eye(4)) == 2.0

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidMatrixError):
            core.frobenius_norm([[1.0, np.nan], [0.0, 1.0]])

    def test_norm_sandwich_random(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            m = rng.normal(size=(3, 3))
            op = core.operator_norm(m)
            fro = core.frobenius_norm(m)
            assert op <= fro * (1 + 1e-9)
            assert fro <= np.sqrt(3) * op * (1 + 1e-9)


class TestNormInequalities:
    """The matrix-norm chain and the operator bound on vectors."""

    def test_chain_on_thousand_matrices(self):
        rng = np.random.default_rng(123)
        for _ in range(1000):
            n = int(rng.integers(1, 9))
            m = rng.normal(size=(n, n))
            op = core.operator_norm(m)
            fro = core.frobenius_norm(m)
            assert op <= fro * (1 + 1e-9)
            assert fro <= np.sqrt(n) * op * (1 + 1e-9)

    def test_matrix_vector_bound(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            n = int(rng.integers(1, 9))
            m = rng.normal(size=(n, n))
            x = rng.normal(size=n)
            assert np.linalg.norm(m @ x) <= core.operator_norm(m) * np.linalg.norm(
                x
            ) * (1 + 1e-9)


class TestSphereGeodesic:
    def test_orthogonal_unit_vectors(self):
        assert core.sphere_geodesic([1, 0], [0, 1]) == pytest.approx(np.pi / 2)

    def test_identity_of_indiscernibles(self):
        x = np.array([0.6, 0.8])
        assert core.sphere_geodesic(x, x) == 0.0

    def test_chord_arcsin_relation(self):
        # chord sqrt(2) corresponds to geodesic 2*arcsin(sqrt(2)/2) = pi/2
        expected = 2.0 * np.arcsin(np.sqrt(2.0) / 2.0)
        got = core.sphere_geodesic([1, 0], [0, 1])
        assert got == pytest.approx(expected, abs=1e-15)

    def test_antipodal_is_pi(self):
        assert core.sphere_geodesic([1, 0, 0], [-1, 0, 0]) == pytest.approx(np.pi)

    def test_off_sphere_rejected(self):
        with pytest.raises(OffSphereError):
            core.sphere_geodesic([1.1, 0], [0, 1])

    def test_slightly_off_sphere_renormalized(self):
        x = np.array([1.0 + 5e-10, 0.0])
        assert core.sphere_geodesic(x, [1.0, 0.0]) == pytest.approx(0.0, abs=1e-7)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            core.sphere_geodesic([1, 0], [0, 0, 1])

    def test_geodesic_chord_comparison(self):
        # chord <= geodesic <= (pi/2) * chord on sampled unit pairs
        rng = np.random.default_rng(11)
        for _ in range(2000):
            n = int(rng.integers(2, 6))
            x = rng.normal(size=n)
            y = rng.normal(size=n)
            x /= np.linalg.norm(x)
            y /= np.linalg.norm(y)
            geo = core.sphere_geodesic(x, y)
            chord = np.linalg.norm(x - y)
            assert geo >= chord - 1e-12
            assert geo <= (np.pi / 2) * chord + 1e-12


class TestRotationMatrix:
    def test_zero_angle_is_identity(self):
        assert np.array_equal(core.rotation_matrix((0, 1), 0.0, 3), np.eye(3))

    def test_quarter_turn(self):
        r = core.rotation_matrix((0, 1), np.pi / 2, 2)
        np.testing.assert_allclose(r @ [1, 0], [0, 1], atol=1e-15)

    def test_orthogonal_and_special(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            n = int(rng.integers(2, 7))
            i = int(rng.integers(0, n - 1))
            j = int(rng.integers(i + 1, n))
            r = core.rotation_matrix((i, j), rng.uniform(-10, 10), n)
            assert core.orthogonality_defect(r) <= 1e-12
            assert abs(np.linalg.det(r) - 1.0) <= 1e-12

    def test_angle_addition(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            a, b = rng.uniform(-3, 3, size=2)
            lhs = core.rotation_matrix((0, 1), a, 4) @ core.rotation_matrix(
                (0, 1), b, 4
            )
            rhs = core.rotation_matrix((0, 1), a + b, 4)
            assert np.abs(lhs - rhs).max() <= 1e-12

    def test_invalid_planes(self):
        with pytest.raises(InvalidPlaneError):
            core.rotation_matrix((1, 1), 0.3, 3)
        with pytest.raises(InvalidPlaneError):
            core.rotation_matrix((0, 3), 0.3, 3)
        with pytest.raises(InvalidPlaneError):
            core.rotation_matrix((2, 0), 0.3, 3)
        with pytest.raises(InvalidPlaneError):
            core.rotation_matrix((0, 1), np.inf, 2)
