"""Pressure reconstruction via a second harmonic solve.

With the Bernoulli gauge, p = -phi_t - |grad phi|^2 / 2.  phi_t is itself
harmonic: its surface trace is -|u|^2/2 (zero surface pressure) and its
wall flux vanishes because the walls are fixed.  The pressure field is
therefore available anywhere in the interior from two sets of panel
Cauchy data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .bem import (DEFAULT_NEAR_FIELD_FACTOR, CauchyData, admissible_interior,
                  eval_interior, solve_surface_dirichlet)
from .evolution import FlowState, velocity_from_cauchy
from .geometry import BoundaryMesh
from .errors import NearBoundaryError

FloatArray = NDArray[np.float64]


def solve_phi_t(state: FlowState) -> CauchyData:
    """Cauchy data of the potential's time derivative on the current mesh."""
    mesh = state.mesh
    u, _ = velocity_from_cauchy(state, state.cauchy)
    half_speed2 = 0.5 * np.einsum("ij,ij->i", u, u)
    surface_data = -mesh.surface_panel_values(half_speed2)
    return solve_surface_dirichlet(mesh, surface_data)


@dataclass(frozen=True)
class PressureField:
    """Everything needed to evaluate p at interior points."""

    mesh: BoundaryMesh
    phi_cauchy: CauchyData
    phi_t_cauchy: CauchyData
    near_field_factor: float = DEFAULT_NEAR_FIELD_FACTOR

    @classmethod
    def from_state(cls, state: FlowState,
                   near_field_factor: float = DEFAULT_NEAR_FIELD_FACTOR) -> "PressureField":
        return cls(mesh=state.mesh, phi_cauchy=state.cauchy,
                   phi_t_cauchy=solve_phi_t(state),
                   near_field_factor=near_field_factor)


def pressure_at(field: PressureField, points: FloatArray) -> FloatArray:
    """p = -phi_t - |grad phi|^2 / 2 at interior points."""
    phit, _ = eval_interior(field.mesh, field.phi_t_cauchy, points,
                            field.near_field_factor)
    _, grad = eval_interior(field.mesh, field.phi_cauchy, points,
                            field.near_field_factor)
    return -phit - 0.5 * np.einsum("ij,ij->i", grad, grad)


def velocity_at(field: PressureField, points: FloatArray) -> FloatArray:
    _, grad = eval_interior(field.mesh, field.phi_cauchy, points,
                            field.near_field_factor)
    return grad


def pressure_poisson_residual(field: PressureField, points: FloatArray, h: float):
    """Residual of -Lap p = (d1 u1)^2 + (d2 u2)^2 + 2 (d2 u1)^2 by finite differences.

    Five-point Laplacian of p with step h; velocity gradients by centered
    differences of the interior velocity with the same step.  Returns
    (residuals, rhs_values); the right-hand side must be nonnegative.
    """
    if h <= 0.0:
        raise ValueError("h must be positive")
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    e1 = np.array([h, 0.0])
    e2 = np.array([0.0, h])
    p0 = pressure_at(field, pts)
    pe = pressure_at(field, pts + e1)
    pw = pressure_at(field, pts - e1)
    pn = pressure_at(field, pts + e2)
    ps = pressure_at(field, pts - e2)
    lap_p = (pe + pw + pn + ps - 4.0 * p0) / (h * h)

    ue = velocity_at(field, pts + e1)
    uw = velocity_at(field, pts - e1)
    un = velocity_at(field, pts + e2)
    us = velocity_at(field, pts - e2)
    d1u = (ue - uw) / (2.0 * h)
    d2u = (un - us) / (2.0 * h)
    rhs = d1u[:, 0] ** 2 + d2u[:, 1] ** 2 + 2.0 * d2u[:, 0] ** 2
    return np.abs(-lap_p - rhs), rhs


def interior_lattice(field: PressureField, n_per_side: int) -> FloatArray:
    """Admissible uniform lattice points covering the domain's bounding box."""
    top = float(field.mesh.b[:, 1].max())
    xs = (np.arange(n_per_side) + 0.5) / n_per_side
    ys = (np.arange(n_per_side) + 0.5) / n_per_side * top
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    pts = np.column_stack([X.ravel(), Y.ravel()])
    ok = admissible_interior(field.mesh, pts, field.near_field_factor)
    return pts[ok]


def pressure_min(field: PressureField, n_per_side: int = 16):
    """(min p, argmin point, max |p|) over the admissible interior lattice."""
    pts = interior_lattice(field, n_per_side)
    if pts.shape[0] == 0:
        raise ValueError("no admissible lattice points (lattice too coarse)")
    p = pressure_at(field, pts)
    i = int(np.argmin(p))
    return float(p[i]), pts[i], float(np.abs(p).max())


def wall_tangential_speed(field: PressureField) -> FloatArray:
    """u2 on the right wall (x1=1), one value per wall panel midpoint.

    On that wall u1 = 0, so the velocity is the tangential derivative of
    the solved wall potential along x2.
    """
    mesh = field.mesh
    sl = mesh.right_slice
    x2 = mesh.midpoints[sl, 1]
    phi_w = field.phi_cauchy.values[sl]
    return np.gradient(phi_w, x2)


def wall_pressure_values(field: PressureField) -> FloatArray:
    """p on the right wall from boundary data only: p = -phi_t - u2^2/2."""
    mesh = field.mesh
    sl = mesh.right_slice
    u2 = wall_tangential_speed(field)
    return -field.phi_t_cauchy.values[sl] - 0.5 * u2 ** 2


def wall_pressure_integral(field: PressureField) -> float:
    """int_0^1 p(t, 1, x2) dx2 from the right-wall panel data."""
    mesh = field.mesh
    sl = mesh.right_slice
    return float(np.dot(wall_pressure_values(field), mesh.lengths[sl]))


def wall_normal_pressure_gradient(field: PressureField, offset: float,
                                  n_samples: int = 9, h: float | None = None):
    """Max |n . grad p| sampled at points offset from each wall, by central FD.

    Diagnostic for the zero wall Neumann condition on p; offset must keep
    the FD stencil out of the near-field band.
    """
    if h is None:
        h = 0.25 * offset
    ys = np.linspace(0.15, 0.85, n_samples)
    worst = 0.0
    for pts, normal in (
            (np.column_stack([np.full(n_samples, offset), ys]), np.array([-1.0, 0.0])),
            (np.column_stack([np.full(n_samples, 1.0 - offset), ys]), np.array([1.0, 0.0])),
            (np.column_stack([ys, np.full(n_samples, offset)]), np.array([0.0, -1.0]))):
        step = h * normal
        dpdn = (pressure_at(field, pts + step) - pressure_at(field, pts - step)) / (2.0 * h)
        worst = max(worst, float(np.abs(dpdn).max()))
    return worst
