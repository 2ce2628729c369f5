"""Interface curve, boundary mesh, and polygon utilities."""

import numpy as np
import pytest

from wavebox.errors import (BottomContactError, GeometryError,
                            SelfIntersectionError)
from wavebox.geometry import (BC_DIRICHLET_SURFACE, BC_NEUMANN_WALL,
                              InterfaceCurve, build_boundary_mesh,
                              flat_interface, point_segment_distance,
                              points_inside, polygon_area, self_intersects)


def bumped_interface(n, amplitude=0.1):
    alpha = np.linspace(0.0, 1.0, n)
    x2 = 1.0 + amplitude * np.sin(np.pi * alpha) ** 2
    return InterfaceCurve(alpha, np.column_stack([alpha, x2]))


class TestInterfaceCurve:
    def test_flat_interface(self):
        curve = flat_interface(11)
        assert curve.n_markers == 11
        np.testing.assert_allclose(curve.x[:, 1], 1.0)
        np.testing.assert_allclose(curve.segment_lengths(), 0.1)
        np.testing.assert_allclose(curve.arclength()[-1], 1.0)

    def test_requires_pinned_endpoints(self):
        alpha = np.linspace(0.0, 1.0, 5)
        x = np.column_stack([alpha, np.ones(5)])
        x[0, 0] = 0.01
        with pytest.raises(GeometryError):
            InterfaceCurve(alpha, x)
        x = np.column_stack([alpha, np.ones(5)])
        x[-1, 1] = 1.02
        with pytest.raises(GeometryError):
            InterfaceCurve(alpha, x)

    def test_requires_increasing_alpha(self):
        alpha = np.array([0.0, 0.5, 0.4, 1.0])
        x = np.column_stack([np.array([0.0, 0.5, 0.6, 1.0]), np.ones(4)])
        with pytest.raises(GeometryError):
            InterfaceCurve(alpha, x)

    def test_rejects_nonfinite(self):
        alpha = np.linspace(0.0, 1.0, 4)
        x = np.column_stack([alpha, np.ones(4)])
        x[1, 1] = np.nan
        with pytest.raises(GeometryError):
            InterfaceCurve(alpha, x)

    def test_turning_curvature_flat_is_zero(self):
        curve = flat_interface(9)
        np.testing.assert_allclose(curve.turning_curvature(), 0.0, atol=1e-12)

    def test_turning_curvature_of_circle_arc(self):
        # markers on a circular bump: discrete curvature approaches 1/R
        theta = np.linspace(np.pi, 0.0, 101)
        radius = 0.5
        x1 = 0.5 + radius * np.cos(theta)
        x2 = 1.0 + radius * np.sin(theta)
        curve = InterfaceCurve(np.linspace(0.0, 1.0, 101),
                               np.column_stack([x1, x2]))
        np.testing.assert_allclose(curve.turning_curvature(), 1.0 / radius,
                                   rtol=1e-3)


class TestSelfIntersection:
    def test_simple_curve(self):
        assert not self_intersects(bumped_interface(33))

    def test_crossing_curve(self):
        alpha = np.linspace(0.0, 1.0, 6)
        x1 = np.array([0.0, 0.7, 0.7, 0.3, 0.3, 1.0])
        x2 = np.array([1.0, 1.2, 0.6, 0.6, 1.2, 1.0])
        curve = InterfaceCurve(alpha, np.column_stack([x1, x2]))
        assert self_intersects(curve)


class TestBoundaryMesh:
    def test_panel_counts_and_kinds(self):
        mesh = build_boundary_mesh(flat_interface(17), 8)
        assert mesh.n_panels == 16 + 3 * 8
        assert np.all(mesh.bc_kind[mesh.surface_slice] == BC_DIRICHLET_SURFACE)
        for sl in (mesh.bottom_slice, mesh.right_slice, mesh.left_slice):
            assert np.all(mesh.bc_kind[sl] == BC_NEUMANN_WALL)

    def test_closed_and_ccw(self):
        mesh = build_boundary_mesh(bumped_interface(25), 8)
        np.testing.assert_allclose(np.roll(mesh.a, -1, axis=0), mesh.b,
                                   atol=1e-15)
        assert polygon_area(mesh) > 1.0   # bumped surface adds area

    def test_normals_point_outward(self):
        mesh = build_boundary_mesh(bumped_interface(25), 8)
        centroid = mesh.midpoints.mean(axis=0)
        outward = np.einsum("ij,ij->i", mesh.normals,
                            mesh.midpoints - centroid)
        assert np.all(outward > 0.0)

    def test_side_walls_graded_toward_corners(self):
        mesh = build_boundary_mesh(flat_interface(17), 8)
        right = mesh.lengths[mesh.right_slice]
        assert np.all(np.diff(right) < 0.0)       # finer approaching (1,1)
        left = mesh.lengths[mesh.left_slice]
        assert np.all(np.diff(left) > 0.0)        # runs (0,1) -> (0,0)
        np.testing.assert_allclose(right.sum(), 1.0)

    def test_surface_value_round_trip(self):
        mesh = build_boundary_mesh(flat_interface(9), 4)
        marker_values = np.arange(9.0)
        panels = mesh.surface_panel_values(marker_values)
        np.testing.assert_allclose(mesh.marker_panel_from_surface(panels),
                                   0.5 * (marker_values[:-1] + marker_values[1:]))

    def test_wall_crossing_rejected(self):
        alpha = np.linspace(0.0, 1.0, 9)
        x1 = alpha.copy()
        x1[4] = 1.2
        x2 = np.ones(9)
        x2[3:6] = [1.1, 1.2, 1.1]   # keep the polyline simple
        curve = InterfaceCurve(alpha, np.column_stack([x1, x2]))
        with pytest.raises(SelfIntersectionError):
            build_boundary_mesh(curve, 4)

    def test_bottom_contact_rejected(self):
        alpha = np.linspace(0.0, 1.0, 9)
        x2 = np.ones(9)
        x2[4] = -0.05
        curve = InterfaceCurve(alpha, np.column_stack([alpha, x2]))
        with pytest.raises(BottomContactError):
            build_boundary_mesh(curve, 4)

    def test_too_few_wall_panels(self):
        with pytest.raises(ValueError):
            build_boundary_mesh(flat_interface(9), 3)


class TestPolygonMeasures:
    def test_unit_square_area(self):
        mesh = build_boundary_mesh(flat_interface(33), 8)
        assert polygon_area(mesh) == pytest.approx(1.0, abs=1e-14)

    def test_bump_area_matches_quadrature(self):
        curve = bumped_interface(401, amplitude=0.2)
        mesh = build_boundary_mesh(curve, 8)
        # area = 1 + 0.2 * int sin^2(pi a) da = 1.1
        assert polygon_area(mesh) == pytest.approx(1.1, abs=1e-5)

    def test_points_inside(self):
        mesh = build_boundary_mesh(flat_interface(17), 8)
        pts = np.array([[0.5, 0.5], [0.01, 0.99], [1.2, 0.5],
                        [0.5, 1.01], [-0.1, 0.2]])
        np.testing.assert_array_equal(points_inside(mesh, pts),
                                      [True, True, False, False, False])

    def test_point_segment_distance(self):
        a = np.array([[0.0, 0.0]])
        b = np.array([[1.0, 0.0]])
        pts = np.array([[0.5, 0.3], [2.0, 0.0], [-1.0, 1.0]])
        d = point_segment_distance(pts, a, b)
        np.testing.assert_allclose(d[:, 0], [0.3, 1.0, np.sqrt(2.0)])
