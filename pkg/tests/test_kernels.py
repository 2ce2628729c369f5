"""Quadrature, dense solves, and the closed-form Laplace panel integrals."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavebox.errors import GeometryError, SingularMatrixError
from wavebox.geometry import build_boundary_mesh, flat_interface
from wavebox.kernels import (DenseSystem, gauss_legendre, influence_gradients,
                             influence_matrices, panel_log_integrals,
                             solve_dense)


class TestGaussLegendre:
    def test_degree_bounds(self):
        for n in (0, 65, -3):
            with pytest.raises(ValueError):
                gauss_legendre(n)

    def test_low_order_values(self):
        rule = gauss_legendre(2)
        np.testing.assert_allclose(np.sort(rule.nodes),
                                   [-1.0 / np.sqrt(3.0), 1.0 / np.sqrt(3.0)])
        np.testing.assert_allclose(rule.weights, [1.0, 1.0])

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(1, 12), data=st.data())
    def test_polynomial_exactness(self, n, data):
        # exact for degree <= 2n-1 on an arbitrary interval
        degree = data.draw(st.integers(0, 2 * n - 1))
        coeffs = data.draw(st.lists(
            st.floats(-2.0, 2.0), min_size=degree + 1, max_size=degree + 1))
        lo, hi = -0.7, 1.3
        rule = gauss_legendre(n)
        poly = np.polynomial.Polynomial(coeffs)
        approx = rule.integrate(poly, lo, hi)
        exact = poly.integ()(hi) - poly.integ()(lo)
        assert approx == pytest.approx(exact, abs=1e-10)

    def test_integrate_transcendental(self):
        rule = gauss_legendre(24)
        assert rule.integrate(np.sin, 0.0, np.pi) == pytest.approx(2.0, abs=1e-12)


class TestSolveDense:
    def test_solves(self):
        rng = np.random.default_rng(7)
        A = rng.standard_normal((12, 12)) + 12.0 * np.eye(12)
        x = rng.standard_normal(12)
        out = solve_dense(DenseSystem(matrix=A, rhs=A @ x))
        np.testing.assert_allclose(out, x, atol=1e-11)

    @pytest.mark.filterwarnings("ignore::scipy.linalg.LinAlgWarning")
    def test_singular_raises(self):
        A = np.ones((4, 4))
        with pytest.raises(SingularMatrixError):
            solve_dense(DenseSystem(matrix=A, rhs=np.ones(4)))

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            DenseSystem(matrix=np.ones((3, 2)), rhs=np.ones(3))
        with pytest.raises(ValueError):
            DenseSystem(matrix=np.full((3, 3), np.nan), rhs=np.ones(3))


class TestPanelIntegrals:
    def test_single_layer_matches_quadrature(self):
        a, b = np.array([0.2, 0.1]), np.array([0.7, 0.4])
        target = np.array([0.3, 0.9])
        S, D = panel_log_integrals(a, b, target)
        rule = gauss_legendre(48)

        def green(t):
            y = a[None, :] + 0.5 * (t[:, None] + 1.0) * (b - a)[None, :]
            return -np.log(np.linalg.norm(y - target, axis=1)) / (2.0 * np.pi)

        ell = np.linalg.norm(b - a)
        expected = 0.5 * ell * np.dot(rule.weights, green(rule.nodes))
        assert S == pytest.approx(expected, abs=1e-12)

    def test_double_layer_matches_quadrature(self):
        a, b = np.array([0.2, 0.1]), np.array([0.7, 0.4])
        target = np.array([0.3, 0.9])
        _, D = panel_log_integrals(a, b, target)
        d = b - a
        ell = np.linalg.norm(d)
        normal = np.array([d[1], -d[0]]) / ell
        rule = gauss_legendre(48)

        def dgdn(t):
            # dG/dn_y of G = -(1/2pi) ln|x - y|
            y = a[None, :] + 0.5 * (t[:, None] + 1.0) * d[None, :]
            r = y - target
            return -(r @ normal) / (2.0 * np.pi * np.einsum("ij,ij->i", r, r))

        expected = 0.5 * ell * np.dot(rule.weights, dgdn(rule.nodes))
        assert D == pytest.approx(expected, abs=1e-12)

    def test_on_panel_principal_value(self):
        a, b = np.array([0.0, 0.0]), np.array([1.0, 0.0])
        S, D = panel_log_integrals(a, b, np.array([0.5, 0.0]))
        # int_0^1 -(1/2pi) ln|x-1/2| dx = (1 + ln 2) / (2 pi)
        assert D == 0.0
        assert S == pytest.approx((1.0 + np.log(2.0)) / (2.0 * np.pi), abs=1e-14)

    def test_degenerate_panel(self):
        with pytest.raises(GeometryError):
            panel_log_integrals([0.0, 0.0], [0.0, 0.0], [1.0, 1.0])


class TestJumpRelations:
    """Row sums of the double layer see the full boundary: the subtended
    angle is -1 inside, 0 outside, -1/2 on a smooth boundary point."""

    @pytest.fixture(scope="class")
    @staticmethod
    def mesh():
        return build_boundary_mesh(flat_interface(33), 16)

    def test_interior(self, mesh):
        pts = np.array([[0.5, 0.5], [0.1, 0.9], [0.93, 0.07]])
        _, D = influence_matrices(mesh, pts)
        np.testing.assert_allclose(D.sum(axis=1), -1.0, atol=1e-12)

    def test_exterior(self, mesh):
        pts = np.array([[1.5, 0.5], [-0.2, 1.4], [0.5, -0.3]])
        _, D = influence_matrices(mesh, pts)
        np.testing.assert_allclose(D.sum(axis=1), 0.0, atol=1e-12)

    def test_collocation_points(self, mesh):
        _, D = influence_matrices(mesh, mesh.midpoints)
        np.testing.assert_allclose(D.sum(axis=1), -0.5, atol=1e-12)


class TestInfluenceGradients:
    def test_matches_finite_differences(self):
        mesh = build_boundary_mesh(flat_interface(17), 8)
        pts = np.array([[0.37, 0.55], [0.81, 0.33]])
        gS, gD = influence_gradients(mesh, pts)
        h = 1e-6
        for axis in range(2):
            e = np.zeros(2)
            e[axis] = h
            Sp, Dp = influence_matrices(mesh, pts + e)
            Sm, Dm = influence_matrices(mesh, pts - e)
            np.testing.assert_allclose(gS[:, :, axis], (Sp - Sm) / (2.0 * h),
                                       atol=1e-8)
            np.testing.assert_allclose(gD[:, :, axis], (Dp - Dm) / (2.0 * h),
                                       atol=1e-7)

    def test_rejects_endpoint_target(self):
        mesh = build_boundary_mesh(flat_interface(9), 4)
        with pytest.raises(GeometryError):
            influence_gradients(mesh, mesh.a[3][None, :])
