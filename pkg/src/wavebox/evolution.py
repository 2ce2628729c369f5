"""Time evolution of the free surface.

Markers are material points advected by the fluid velocity; the surface
potential follows them with d(phi)/dt = |u|^2 / 2 (Bernoulli with zero
surface pressure and no gravity, constant absorbed into phi).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import NDArray
from scipy.interpolate import PchipInterpolator

from .bem import CauchyData, solve_surface_dirichlet
from .errors import (BottomContactError, BreakdownError, BreakdownSignal,
                     GeometryError, SelfIntersectionError, SingularMatrixError)
from .geometry import InterfaceCurve, BoundaryMesh, build_boundary_mesh

FloatArray = NDArray[np.float64]

CORNER_LEFT = np.array([0.0, 1.0])
CORNER_RIGHT = np.array([1.0, 1.0])


@dataclass(frozen=True)
class FlowState:
    """Immutable snapshot of the surface state at one time."""

    t: float
    curve: InterfaceCurve
    phi: FloatArray
    wall_panels_per_side: int = 16

    def __post_init__(self):
        phi = np.ascontiguousarray(self.phi, dtype=np.float64)
        object.__setattr__(self, "phi", phi)
        if phi.shape != (self.curve.n_markers,):
            raise ValueError("phi must hold one value per marker")

    @cached_property
    def mesh(self) -> BoundaryMesh:
        return build_boundary_mesh(self.curve, self.wall_panels_per_side)

    @cached_property
    def cauchy(self) -> CauchyData:
        """Cauchy data of the surface potential (zero wall flux)."""
        mesh = self.mesh
        return solve_surface_dirichlet(mesh, mesh.surface_panel_values(self.phi))

    def replace(self, *, t=None, x=None, phi=None) -> "FlowState":
        curve = self.curve
        if x is not None:
            curve = InterfaceCurve(self.curve.alpha, x)
        return FlowState(t=self.t if t is None else float(t),
                         curve=curve,
                         phi=self.phi if phi is None else phi,
                         wall_panels_per_side=self.wall_panels_per_side)


@dataclass(frozen=True)
class StateDerivative:
    velocity: FloatArray       # (n,2) marker velocities
    dphi: FloatArray           # (n,) material derivative of surface potential
    corner_residual: float     # pre-projection corner speed / max speed


def marker_geometry(curve: InterfaceCurve):
    """Unit tangents and upward normals at markers, from adjacent segments."""
    d = np.diff(curve.x, axis=0)
    ell = np.linalg.norm(d, axis=1)
    seg_t = d / ell[:, None]
    t = np.empty((curve.n_markers, 2))
    t[0] = seg_t[0]
    t[-1] = seg_t[-1]
    t[1:-1] = seg_t[:-1] + seg_t[1:]
    t /= np.linalg.norm(t, axis=1)[:, None]
    n = np.column_stack([-t[:, 1], t[:, 0]])   # left of travel = out of the fluid
    return t, n


def velocity_from_cauchy(state: FlowState, cauchy: CauchyData) -> tuple[FloatArray, float]:
    """Marker velocities from solved Cauchy data; corners projected to zero.

    Normal component from the solved surface flux (panel midpoints averaged
    to markers), tangential component from differencing phi in arclength.
    """
    mesh = state.mesh
    q_panels = mesh.marker_panel_from_surface(cauchy.fluxes[mesh.surface_slice])
    n_mark = state.curve.n_markers
    q = np.empty(n_mark)
    q[0] = q_panels[0]
    q[-1] = q_panels[-1]
    q[1:-1] = 0.5 * (q_panels[:-1] + q_panels[1:])

    s = state.curve.arclength()
    phi_s = np.gradient(state.phi, s)
    tangents, normals = marker_geometry(state.curve)
    u = q[:, None] * normals + phi_s[:, None] * tangents

    speeds = np.linalg.norm(u, axis=1)
    max_speed = float(speeds.max())
    corner_speed = float(max(speeds[0], speeds[-1]))
    residual = corner_speed / max_speed if max_speed > 0.0 else 0.0
    u[0] = 0.0
    u[-1] = 0.0
    return u, residual


def surface_velocity(state: FlowState) -> FloatArray:
    if state.curve.n_markers < 8:
        raise ValueError("need at least 8 surface markers")
    u, _ = velocity_from_cauchy(state, state.cauchy)
    return u


def state_derivative(state: FlowState) -> StateDerivative:
    u, residual = velocity_from_cauchy(state, state.cauchy)
    dphi = 0.5 * np.einsum("ij,ij->i", u, u)
    return StateDerivative(velocity=u, dphi=dphi, corner_residual=residual)


def kinetic_energy(state: FlowState, cauchy: CauchyData | None = None) -> float:
    """E = (1/2) sum phi * flux * length over all panels (discrete boundary energy)."""
    if cauchy is None:
        cauchy = state.cauchy
    mesh = state.mesh
    return float(0.5 * np.sum(cauchy.values * cauchy.fluxes * mesh.lengths))


def _wrap_stage_failure(t: float, stage: int, exc: Exception) -> BreakdownError:
    if isinstance(exc, SelfIntersectionError):
        kind = "self_intersection"
    elif isinstance(exc, BottomContactError):
        kind = "bottom_contact"
    elif isinstance(exc, SingularMatrixError):
        kind = "solver_failure"
    else:
        kind = "solver_failure"
    return BreakdownError(BreakdownSignal(
        t_break=t, kind=kind, detail=f"stage {stage}: {exc}"))


def rk4_step(state: FlowState, dt: float,
             derivative=state_derivative) -> FlowState:
    """Classical 4-stage step on (marker positions, surface potential).

    Any stage failing with a geometric or solver error aborts the step with
    a BreakdownError recording the stage and reason.  ``derivative`` is
    injectable for manufactured-trajectory tests.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    x0, phi0, t0 = state.curve.x, state.phi, state.t

    def stage(i, xs, phis, ts):
        try:
            st = state.replace(t=ts, x=xs, phi=phis)
            return derivative(st)
        except (GeometryError, SingularMatrixError) as exc:
            raise _wrap_stage_failure(t0, i, exc) from exc

    k1 = stage(1, x0, phi0, t0)
    k2 = stage(2, x0 + 0.5 * dt * k1.velocity, phi0 + 0.5 * dt * k1.dphi, t0 + 0.5 * dt)
    k3 = stage(3, x0 + 0.5 * dt * k2.velocity, phi0 + 0.5 * dt * k2.dphi, t0 + 0.5 * dt)
    k4 = stage(4, x0 + dt * k3.velocity, phi0 + dt * k3.dphi, t0 + dt)

    x1 = x0 + (dt / 6.0) * (k1.velocity + 2.0 * k2.velocity + 2.0 * k3.velocity + k4.velocity)
    phi1 = phi0 + (dt / 6.0) * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi)
    x1[0] = CORNER_LEFT
    x1[-1] = CORNER_RIGHT
    return state.replace(t=t0 + dt, x=x1, phi=phi1)


def adaptive_dt(state: FlowState, cfl: float,
                dt_min: float = 1e-9, dt_max: float = 0.05,
                speeds: FloatArray | None = None) -> float:
    """CFL timestep: cfl * min(local spacing / local speed), clamped.

    A pre-clamp value below dt_min signals numerical blow-up and raises
    BreakdownError("timestep_collapse").
    """
    if not 0.0 < cfl <= 1.0:
        raise ValueError("cfl must be in (0, 1]")
    if speeds is None:
        u = surface_velocity(state)
        speeds = np.linalg.norm(u, axis=1)
    ell = state.curve.segment_lengths()
    spacing = np.empty(state.curve.n_markers)
    spacing[0] = ell[0]
    spacing[-1] = ell[-1]
    spacing[1:-1] = np.minimum(ell[:-1], ell[1:])
    dt = cfl * float(np.min(spacing / (speeds + 1e-30)))
    if dt < dt_min:
        raise BreakdownError(BreakdownSignal(
            t_break=state.t, kind="timestep_collapse",
            detail=f"dt {dt:.3e} below dt_min {dt_min:.3e}"))
    return min(dt, dt_max)


def redistribute_markers(state: FlowState) -> FlowState:
    """Reposition markers to uniform arclength via monotone cubic interpolation.

    Corners stay put; phi is carried along the interpolated curve.
    """
    s = state.curve.arclength()
    if s[-1] <= 0.0:
        raise GeometryError("zero-length interface")
    n = state.curve.n_markers
    s_new = np.linspace(0.0, s[-1], n)
    fx = PchipInterpolator(s, state.curve.x[:, 0])
    fy = PchipInterpolator(s, state.curve.x[:, 1])
    fp = PchipInterpolator(s, state.phi)
    x_new = np.column_stack([fx(s_new), fy(s_new)])
    x_new[0] = CORNER_LEFT
    x_new[-1] = CORNER_RIGHT
    curve = InterfaceCurve(np.linspace(0.0, 1.0, n), x_new)
    return FlowState(t=state.t, curve=curve, phi=fp(s_new),
                     wall_panels_per_side=state.wall_panels_per_side)
