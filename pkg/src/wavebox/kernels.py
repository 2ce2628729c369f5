"""Shared numerics: Gauss rules, dense solves, Laplace panel integrals.

The 2D Laplace free-space kernel is G(x,y) = -(1/2pi) ln|x-y|.  All panel
integrals below are closed-form for straight panels with constant density,
so assembly needs no near-singular quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from .errors import GeometryError, SingularMatrixError

FloatArray = NDArray[np.float64]

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class QuadratureRule:
    nodes: FloatArray
    weights: FloatArray

    def integrate(self, f, lo: float = -1.0, hi: float = 1.0) -> float:
        """Integrate f over [lo, hi] via affine map of the reference rule."""
        half = 0.5 * (hi - lo)
        x = lo + half * (self.nodes + 1.0)
        return float(half * np.dot(self.weights, f(x)))


def gauss_legendre(n: int) -> QuadratureRule:
    """Gauss-Legendre rule with n points on (-1, 1)."""
    if not 1 <= n <= 64:
        raise ValueError(f"gauss_legendre: n must be in [1, 64], got {n}")
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return QuadratureRule(nodes=nodes, weights=weights)


@dataclass(frozen=True)
class DenseSystem:
    matrix: FloatArray
    rhs: FloatArray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        r = np.asarray(self.rhs, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or r.shape != (m.shape[0],):
            raise ValueError("DenseSystem: matrix must be n x n with length-n rhs")
        if not (np.isfinite(m).all() and np.isfinite(r).all()):
            raise ValueError("DenseSystem: non-finite entries")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "rhs", r)


def solve_dense(system: DenseSystem) -> FloatArray:
    """LU with partial pivoting; raises SingularMatrixError on tiny pivots."""
    A, b = system.matrix, system.rhs
    lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivot_floor = 1e-13 * np.max(np.sum(np.abs(A), axis=1))
    diag = np.abs(np.diag(lu))
    if np.any(diag < pivot_floor):
        raise SingularMatrixError(
            f"pivot {diag.min():.3e} below threshold {pivot_floor:.3e}")
    return scipy.linalg.lu_solve((lu, piv), b, check_finite=False)


def _local_coords(a, b, lengths, tangents, normals, targets):
    """Panel-local coordinates of targets: (xi along tangent from a, eta along normal).

    Shapes: targets (m,2), panels (n,...); returns (m,n) arrays u1, u2, eta
    with u1 = -xi, u2 = length - xi (endpoint offsets from the foot point).
    """
    rel = targets[:, None, :] - a[None, :, :]
    xi = np.einsum("mnj,nj->mn", rel, tangents)
    eta = np.einsum("mnj,nj->mn", rel, normals)
    return -xi, lengths[None, :] - xi, eta


def _log_antiderivative(u: FloatArray, eta: FloatArray) -> FloatArray:
    """F(u) = u*ln sqrt(u^2+eta^2) - u + eta*atan(u/eta), continuous at eta=0."""
    r2 = u * u + eta * eta
    safe = r2 > 0.0
    out = np.zeros_like(u)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_term = np.where(safe, 0.5 * np.log(np.where(safe, r2, 1.0)), 0.0)
        atan_term = np.where(eta != 0.0, eta * np.arctan(u / np.where(eta != 0.0, eta, 1.0)), 0.0)
    out = u * log_term - u + atan_term
    return out


def influence_matrices(mesh, targets: FloatArray):
    """Single- and double-layer panel integrals for all (target, panel) pairs.

    Returns (S, D) of shape (m, n):
      S[i,j] = int_panel_j G(x_i, y) ds(y)
      D[i,j] = int_panel_j dG/dn_y(x_i, y) ds(y)   (principal value on-panel)
    """
    targets = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    u1, u2, eta = _local_coords(mesh.a, mesh.b, mesh.lengths, mesh.tangents,
                                mesh.normals, targets)
    S = -(_log_antiderivative(u2, eta) - _log_antiderivative(u1, eta)) / TWO_PI
    # Plain arctan of the ratio: arctan2 would wrap to +-pi for eta < 0
    # (targets on the interior side) and corrupt the subtended angle.
    with np.errstate(divide="ignore", invalid="ignore"):
        D = (np.arctan(u2 / eta) - np.arctan(u1 / eta)) / TWO_PI
    # Targets on the panel line (self-panel midpoints in particular) get the
    # principal value 0; without the mask, roundoff-scale eta would make the
    # subtended angle flip to +-pi and D to +-1/2.
    on_line = np.abs(eta) <= 1e-12 * mesh.lengths[None, :]
    D = np.where(on_line, 0.0, D)
    return S, D


def influence_gradients(mesh, targets: FloatArray):
    """Gradients (w.r.t. target) of the single/double layer panel integrals.

    Returns (gradS, gradD), each of shape (m, n, 2).  Targets must be off
    every panel (interior evaluation only).
    """
    targets = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    u1, u2, eta = _local_coords(mesh.a, mesh.b, mesh.lengths, mesh.tangents,
                                mesh.normals, targets)
    r1sq = u1 * u1 + eta * eta
    r2sq = u2 * u2 + eta * eta
    if np.any(r1sq < 1e-28) or np.any(r2sq < 1e-28):
        raise GeometryError("influence_gradients: target coincides with a panel endpoint")
    t = mesh.tangents[None, :, :]
    n = mesh.normals[None, :, :]
    # grad of int G ds = -(1/2pi) [ t*(-(1/2)ln r^2) + n*atan(u/eta) ] between limits
    dlog = 0.5 * (np.log(r2sq) - np.log(r1sq))
    with np.errstate(divide="ignore", invalid="ignore"):
        dang = np.arctan(u2 / eta) - np.arctan(u1 / eta)
    # eta == 0 only for collinear off-panel targets; they subtend zero angle.
    dang = np.where(eta == 0.0, 0.0, dang)
    gradS = -(-dlog[:, :, None] * t + dang[:, :, None] * n) / TWO_PI
    # grad of int dG/dn ds, from d/dx atan(u/eta) = (eta*grad u - u*grad eta)/r^2
    # with grad u = -t, grad eta = n.
    term2 = (-eta[:, :, None] * t - u2[:, :, None] * n) / r2sq[:, :, None]
    term1 = (-eta[:, :, None] * t - u1[:, :, None] * n) / r1sq[:, :, None]
    gradD = (term2 - term1) / TWO_PI
    return gradS, gradD


def panel_log_integrals(a, b, target):
    """Single- and double-layer integrals of one straight panel at one target.

    On-panel targets use the analytic logarithmic formula for the single
    layer; the double-layer principal value is 0 on a straight panel.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    d = b - a
    ell = float(np.linalg.norm(d))
    if ell <= 1e-14:
        raise GeometryError("panel_log_integrals: degenerate panel")
    tangent = d / ell
    normal = np.array([tangent[1], -tangent[0]])

    class _OnePanel:
        pass

    m = _OnePanel()
    m.a = a[None, :]
    m.b = b[None, :]
    m.lengths = np.array([ell])
    m.tangents = tangent[None, :]
    m.normals = normal[None, :]
    S, D = influence_matrices(m, np.asarray(target, dtype=np.float64)[None, :])
    return float(S[0, 0]), float(D[0, 0])
