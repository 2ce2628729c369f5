"""Admissible initial data: harmonic cosine/cosh mode potentials on the unit square.

Each basis term a_k cos(k pi x1) cosh(k pi x2) has zero normal derivative on
all three walls by construction; the corner conditions (zero vertical
velocity at the two pinned corners) constrain the amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .kernels import gauss_legendre

FloatArray = NDArray[np.float64]

CORNER_TOL = 1e-12


@dataclass(frozen=True)
class ModePotential:
    """Sum of cosine/cosh harmonic modes: phi0 = sum a_k cos(k pi x1) cosh(k pi x2)."""

    terms: tuple[tuple[int, float], ...]

    def __post_init__(self):
        terms = tuple((int(k), float(a)) for k, a in self.terms)
        if any(k < 1 for k, _ in terms):
            raise ValueError("mode numbers must be positive integers")
        object.__setattr__(self, "terms", terms)

    def phi(self, x1, x2):
        x1 = np.asarray(x1, dtype=np.float64)
        x2 = np.asarray(x2, dtype=np.float64)
        out = np.zeros(np.broadcast(x1, x2).shape)
        for k, a in self.terms:
            out += a * np.cos(k * np.pi * x1) * np.cosh(k * np.pi * x2)
        return out

    def velocity(self, x1, x2):
        """(u1, u2) = grad phi0."""
        x1 = np.asarray(x1, dtype=np.float64)
        x2 = np.asarray(x2, dtype=np.float64)
        u1 = np.zeros(np.broadcast(x1, x2).shape)
        u2 = np.zeros_like(u1)
        for k, a in self.terms:
            kp = k * np.pi
            u1 += -a * kp * np.sin(kp * x1) * np.cosh(kp * x2)
            u2 += a * kp * np.cos(kp * x1) * np.sinh(kp * x2)
        return u1, u2

    def corner_residuals(self) -> tuple[float, float]:
        """Relative size of u2 at (0,1) and (1,1); both must vanish."""
        scale = sum(abs(a) * k * np.pi * np.sinh(k * np.pi) for k, a in self.terms)
        if scale == 0.0:
            return 0.0, 0.0
        left = sum(a * k * np.pi * np.sinh(k * np.pi) for k, a in self.terms)
        right = sum(a * k * np.pi * (-1.0) ** k * np.sinh(k * np.pi) for k, a in self.terms)
        return abs(left) / scale, abs(right) / scale

    def check_corners(self):
        rl, rr = self.corner_residuals()
        if rl > CORNER_TOL or rr > CORNER_TOL:
            raise ValueError(
                f"mode potential violates the corner conditions: residuals {rl:.3e}, {rr:.3e}")


def make_reference_data(amplitude: float) -> ModePotential:
    """Two-mode (k=1,3) potential satisfying both corner conditions.

    Odd modes give opposite-sign corner velocities at the two ends, so a
    single ratio cancels both simultaneously.  The sign convention makes
    the virial starting value positive for amplitude > 0.
    """
    if amplitude == 0.0:
        raise ValueError("amplitude must be nonzero")
    a1 = -float(amplitude)
    a3 = -a1 * np.sinh(np.pi) / (3.0 * np.sinh(3.0 * np.pi))
    pot = ModePotential(terms=((1, a1), (3, a3)))
    pot.check_corners()
    return pot


def initial_A(potential: ModePotential, quadrature_order: int = 16) -> float:
    """Starting value of the virial functional, by direct quadrature.

    Interior term: tensor-product Gauss on the unit square of u1 * x1.
    Wall term: 1D Gauss of x2 * u2 on the wall x1 = 1.  Independent of the
    boundary-reduced evaluation used during runs.
    """
    rule = gauss_legendre(quadrature_order)
    x = 0.5 * (rule.nodes + 1.0)
    w = 0.5 * rule.weights
    X1, X2 = np.meshgrid(x, x, indexing="ij")
    u1, _ = potential.velocity(X1, X2)
    interior = float(np.einsum("i,j,ij->", w, w, u1 * X1))
    _, u2_wall = potential.velocity(np.ones_like(x), x)
    wall = float(np.dot(w, x * u2_wall))
    return interior + wall


def sample_initial_state(potential: ModePotential, n_markers: int,
                         wall_panels_per_side: int = 16):
    """Flat-surface state at t=0 with the potential sampled on the interface."""
    from .evolution import FlowState
    from .geometry import flat_interface

    if n_markers < 8:
        raise ValueError("need at least 8 markers")
    curve = flat_interface(n_markers)
    phi = potential.phi(curve.x[:, 0], curve.x[:, 1])
    return FlowState(t=0.0, curve=curve, phi=phi,
                     wall_panels_per_side=wall_panels_per_side)
