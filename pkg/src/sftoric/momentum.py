"""Closed-form momentum maps on the upper half-plane.

Every family used here has the same shape.  Each component is

    phi^i(x, y) = c_i + l_i x + (q_i / 2) y^2 + sum_k w_ik rho_k,
    rho_k = sqrt((x - a_k)^2 + y^2),

with the centers ``a_k`` at the Lipschitz points.  Each term solves
``f_xx + f_yy - f_y / y = 0``, and on ``y = 0`` the map is piecewise affine
with breaks at the ``a_k``.  The families differ only in how the
coefficients are read off the labeled polygon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .polygon import LabeledPolygon, validate_polygon


class SingularPointError(ValueError):
    """The Jacobian was requested at a Lipschitz point on the boundary."""


@dataclass(frozen=True)
class HalfPlanePoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite half-plane point ({self.x}, {self.y})")
        if self.y < 0:
            raise ValueError(f"point below the half-plane: y = {self.y}")

    @property
    def r(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def theta(self) -> float:
        return math.atan2(self.y, self.x)

    @classmethod
    def polar(cls, r: float, theta: float) -> "HalfPlanePoint":
        return cls(r * math.cos(theta), r * math.sin(theta))


@dataclass(frozen=True)
class Jacobian2:
    """A[i, 0] = d phi^i / dx and A[i, 1] = d phi^i / dy."""

    matrix: np.ndarray
    det: float


@dataclass(frozen=True, eq=False)
class MomentumFamily:
    kind: str
    offset: np.ndarray    # (2,)
    linear: np.ndarray    # (2,) coefficient of x
    quad: np.ndarray      # (2,) coefficient of y^2 / 2
    centers: np.ndarray   # (k,)
    weights: np.ndarray   # (2, k)

    def _rho(self, x, y):
        x = np.asarray(x, dtype=float)[..., None]
        y = np.asarray(y, dtype=float)[..., None]
        return x - self.centers, y, np.hypot(x - self.centers, y)

    def phi(self, x, y) -> np.ndarray:
        """Momentum values, shape ``broadcast(x, y).shape + (2,)``."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        _, _, rho = self._rho(x, y)
        xs, ys = np.broadcast_arrays(x, y)
        out = np.empty(xs.shape + (2,))
        for i in range(2):
            out[..., i] = (
                self.offset[i] + self.linear[i] * xs + 0.5 * self.quad[i] * ys * ys
                + (rho * self.weights[i]).sum(axis=-1)
            )
        return out

    def jacobian(self, x, y) -> np.ndarray:
        """Closed-form Jacobian, shape ``... + (2, 2)``.

        On ``y = 0`` away from the centers the expressions are the one-sided
        limits ``(x - a)/rho -> sign(x - a)`` and ``y/rho -> 0``.
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        dx, yy, rho = self._rho(x, y)
        if np.any(rho == 0.0):
            bad = np.argwhere(np.broadcast_to(rho == 0.0, rho.shape))[0]
            raise SingularPointError(
                f"Jacobian requested at the Lipschitz point x = {self.centers[bad[-1]]}, y = 0"
            )
        cx = dx / rho
        cy = yy / rho
        ys = np.broadcast_to(y, cx.shape[:-1])
        out = np.empty(cx.shape[:-1] + (2, 2))
        for i in range(2):
            out[..., i, 0] = self.linear[i] + (cx * self.weights[i]).sum(axis=-1)
            out[..., i, 1] = self.quad[i] * ys + (cy * self.weights[i]).sum(axis=-1)
        return out

    def boundary_ddy(self, x) -> np.ndarray:
        """Limit of d^2 phi^i / dy^2 as y -> 0+, for x away from the centers."""
        x = np.asarray(x, dtype=float)[..., None]
        inv = 1.0 / np.abs(x - self.centers)
        return np.stack(
            [self.quad[i] + (inv * self.weights[i]).sum(axis=-1) for i in range(2)], axis=-1
        )

    def second_moment(self) -> np.ndarray:
        """sum_k w_ik a_k^2 for each component."""
        return (self.weights * self.centers**2).sum(axis=-1)


def det2(a: np.ndarray) -> np.ndarray:
    return a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]


def _family(kind, offset, linear, quad, centers, weights) -> MomentumFamily:
    return MomentumFamily(
        kind,
        np.asarray(offset, dtype=float),
        np.asarray(linear, dtype=float),
        np.asarray(quad, dtype=float),
        np.asarray(centers, dtype=float),
        np.asarray(weights, dtype=float).reshape(2, -1),
    )


def taub_nut(alpha=0.0, beta=0.0, s0=1.0, sd=1.0) -> MomentumFamily:
    """Generalized Taub-NUT model with its vertex at the origin."""
    return _family(
        "taub_nut", (0.0, 0.0), (sd / 2, -s0 / 2), (alpha, beta), [0.0], [[sd / 2], [s0 / 2]]
    )


def _edge_terms(poly: LabeledPolygon):
    """Per-edge half-slopes k_i = (p_{i+1} - p_i) / (2 (x_{i+1} - x_i)).

    Returns the weight matrix holding +k_i at x_i and -k_i at x_{i+1}, and
    the constant sum_i k_i (x_{i+1} - x_i) that restores the vertex values.
    """
    x = np.asarray(poly.lipschitz_points)
    p = np.asarray(poly.vertices).reshape(-1, 2)
    w = np.zeros((2, len(x)))
    const = np.zeros(2)
    for i in range(len(x) - 1):
        dx = x[i + 1] - x[i]
        k = (p[i + 1] - p[i]) / (2.0 * dx)
        w[:, i] += k
        w[:, i + 1] -= k
        const += k * dx
    return x, p, w, const


def general(poly: LabeledPolygon) -> MomentumFamily:
    """Non-parallel rays: the left ray points along +phi^2, the right along +phi^1."""
    x, p, w, const = _edge_terms(poly)
    s0, sd = poly.s0, poly.sd
    w[0, -1] += sd / 2
    w[1, 0] += s0 / 2
    offset = (p[0, 0] - sd / 2 * x[-1] + const[0], p[0, 1] + s0 / 2 * x[0] + const[1])
    return _family("general", offset, (sd / 2, -s0 / 2), (poly.alpha, poly.beta), x, w)


def parallel_ray(poly: LabeledPolygon) -> MomentumFamily:
    """Both rays point along +phi^1."""
    x, p, w, const = _edge_terms(poly)
    s0, sd = poly.s0, poly.sd
    w[0, 0] += s0 / 2
    w[0, -1] += sd / 2
    offset = (p[0, 0] + s0 / 2 * x[0] - sd / 2 * x[-1] + const[0], p[0, 1] + const[1])
    return _family("parallel_ray", offset, ((sd - s0) / 2, 0.0), (poly.alpha, 0.0), x, w)


def r2s2_model(poly: LabeledPolygon) -> MomentumFamily:
    """Two-point parallel-ray model built from the outermost vertices."""
    end = LabeledPolygon(
        (poly.lipschitz_points[0], poly.lipschitz_points[-1]),
        (poly.vertices[0], poly.vertices[-1]),
        poly.s0, poly.sd, poly.alpha, 0.0, "parallel_ray",
    )
    fam = parallel_ray(end)
    return MomentumFamily("r2s2_model", fam.offset, fam.linear, fam.quad, fam.centers, fam.weights)


def family_for(poly: LabeledPolygon) -> MomentumFamily:
    """Build the momentum family named by ``poly.family``."""
    validate_polygon(poly).raise_if_invalid()
    if poly.family == "taub_nut":
        fam = taub_nut(poly.alpha, poly.beta, poly.s0, poly.sd)
        # the wedge may sit at any vertex and Lipschitz point
        (x1,), (p1,) = poly.lipschitz_points, poly.vertices
        return MomentumFamily(
            "taub_nut", fam.offset + np.asarray(p1) - fam.linear * x1,
            fam.linear, fam.quad, fam.centers + x1, fam.weights,
        )
    return {"general": general, "parallel_ray": parallel_ray, "r2s2_model": r2s2_model}[
        poly.family
    ](poly)


def model_for(poly: LabeledPolygon) -> MomentumFamily:
    """Asymptotic comparison model of a polygon's family."""
    if poly.family in ("general", "taub_nut"):
        return taub_nut(poly.alpha, poly.beta, poly.s0, poly.sd)
    return r2s2_model(poly)


def _point(pt) -> HalfPlanePoint:
    return pt if isinstance(pt, HalfPlanePoint) else HalfPlanePoint(*map(float, pt))


def eval_momentum(family: MomentumFamily, pt) -> tuple[float, float]:
    pt = _point(pt)
    v = family.phi(pt.x, pt.y)
    return float(v[0]), float(v[1])


def eval_jacobian(family: MomentumFamily, pt) -> Jacobian2:
    pt = _point(pt)
    a = family.jacobian(pt.x, pt.y)
    return Jacobian2(a, float(det2(a)))


def taubnut_det_closed_form(alpha, beta, s0, sd, pt) -> float:
    """det A of the Taub-NUT model in polar form."""
    pt = _point(pt)
    th = pt.theta
    return 0.5 * (alpha * s0 + beta * sd - (alpha * s0 - beta * sd) * math.cos(th)) * pt.y + (
        0.5 * s0 * sd * math.sin(th)
    )


def h2s2_forward(r1, r2):
    """Direct chart of the product example: (r1, r2) -> (phi1, phi2, x, y)."""
    phi1 = np.cosh(r1)
    phi2 = -np.cos(r2)
    y = np.sqrt(np.maximum((phi1 * phi1 - 1.0) * (1.0 - phi2 * phi2), 0.0))
    return phi1, phi2, phi1 * phi2, y


def h2s2_inverse(x, y):
    """Momentum values of the product example at the half-plane point (x, y)."""
    a = np.hypot(x - 1.0, y)
    b = np.hypot(x + 1.0, y)
    return 0.5 * (a + b), 0.5 * (b - a)


__all__ = [
    "HalfPlanePoint", "Jacobian2", "MomentumFamily", "SingularPointError",
    "taub_nut", "general", "parallel_ray", "r2s2_model", "family_for", "model_for",
    "eval_momentum", "eval_jacobian", "taubnut_det_closed_form",
    "h2s2_forward", "h2s2_inverse", "det2",
]
