"""Comparison with asymptotic models along rays of the half-plane."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .momentum import MomentumFamily, det2, model_for
from .polygon import LabeledPolygon, classify_polygon

SQRT2 = math.sqrt(2.0)
CLOSEDNESS_THRESHOLD = 1e-8


class ZeroSignalError(ValueError):
    """The two families agree at the sampled radii, so there is nothing to fit."""


def det_ratio_deviation(family_a: MomentumFamily, family_b: MomentumFamily, x, y):
    """1 - det A / det A~ (signed)."""
    da = det2(family_a.jacobian(x, y))
    db = det2(family_b.jacobian(x, y))
    if np.any(db == 0):
        raise ZeroDivisionError("model Jacobian is singular at the requested point")
    return 1.0 - da / db


def comparison_quotient(family_a, family_b, x, y):
    """sqrt(2) |1 - det A / det A~|, the pointwise deviation of the metrics."""
    q = SQRT2 * np.abs(det_ratio_deviation(family_a, family_b, x, y))
    return float(q) if np.ndim(q) == 0 else q


def _translation_invariants(poly: LabeledPolygon):
    (m1, n1), (md, nd) = poly.vertices[0], poly.vertices[-1]
    x1, xd = poly.lipschitz_points[0], poly.lipschitz_points[-1]
    q = n1 - nd + poly.s0 * x1
    p = md - m1 - poly.sd * xd
    return q, p


def leading_coefficient(poly: LabeledPolygon, theta: float) -> float:
    """Coefficient c(theta) with 1 - det A / det A~ = c(theta) / r + O(1/r^2).

    The comparison model is the Taub-NUT family with the polygon's own
    (alpha, beta, s_0, s_d).  Only the combinations
    ``Q = n_1 - n_d + s_0 x_1`` and ``P = m_d - m_1 - s_d x_d`` enter, which
    makes the result invariant under translating the polygon.
    """
    if classify_polygon(poly).kind != "general":
        raise ValueError("leading coefficient is defined for polygons with non-parallel rays")
    if not 0.0 < theta < math.pi:
        raise ValueError(f"theta must lie in (0, pi), got {theta}")
    a, b, s0, sd = poly.alpha, poly.beta, poly.s0, poly.sd
    q, p = _translation_invariants(poly)
    c = math.cos(theta)
    if a == 0 and b == 0:
        return -(sd * q * (1 + c) + s0 * p * (1 - c)) / (2 * s0 * sd)
    denom = -(a * s0 + b * sd) + (a * s0 - b * sd) * c
    if denom == 0:
        raise ZeroDivisionError(f"general-branch denominator vanishes at theta = {theta}")
    return (a * q + b * p) * math.sin(theta) ** 2 / denom


def rs_leading_coefficient(poly: LabeledPolygon, theta: float) -> float:
    """1/r coefficient of 1 - det A / det A~ for a parallel-ray polygon and its two-point model.

    With alpha > 0 the coefficient is ``-3 dM cos(theta) / (n_1 - n_d)``,
    where dM is the difference of the second moments ``sum_k w_k a_k^2`` of
    the phi^2 weights.  It vanishes at theta = pi/2, where the decay is
    faster than 1/r.
    """
    if classify_polygon(poly).kind != "parallel_ray":
        raise ValueError("expected a parallel-ray polygon")
    if poly.alpha <= 0:
        raise ValueError("coefficient formula needs alpha > 0")
    from .momentum import parallel_ray, r2s2_model

    fam = parallel_ray(poly.with_family("parallel_ray"))
    model = r2s2_model(poly)
    dm = fam.second_moment()[1] - model.second_moment()[1]
    n1, nd = poly.vertices[0][1], poly.vertices[-1][1]
    return -3.0 * dm * math.cos(theta) / (n1 - nd)


@dataclass(frozen=True)
class DecayFit:
    exponent: float
    coefficient: float
    rms_residual: float
    r_range: tuple[float, float]
    n: int


def ray_points(theta, r):
    r = np.asarray(r, dtype=float)
    return r * math.cos(theta), r * math.sin(theta)


def fit_decay(family_a, family_b, theta, r_min=1e2, r_max=1e4, n=12) -> DecayFit:
    """Power-law fit |1 - det A / det A~| ~ C r^k along the ray at angle theta."""
    if n < 8:
        raise ValueError(f"need at least 8 radii for a decay fit, got {n}")
    r = np.geomspace(r_min, r_max, n)
    x, y = ray_points(theta, r)
    dev = np.abs(det_ratio_deviation(family_a, family_b, x, y))
    if np.any(dev == 0):
        raise ZeroSignalError("zero signal: families agree at a sampled radius")
    lr, ld = np.log(r), np.log(dev)
    k, c = np.polyfit(lr, ld, 1)
    resid = ld - (k * lr + c)
    return DecayFit(float(k), float(math.exp(c)), float(np.sqrt(np.mean(resid**2))),
                    (float(r_min), float(r_max)), n)


def killing_norm(family: MomentumFamily, x, y, i: int):
    """|X^i|^2 = G^ii = (y / |det A|) |row i of A|^2 at interior points."""
    a = family.jacobian(x, y)
    return np.asarray(y) / np.abs(det2(a)) * (a[..., i, 0] ** 2 + a[..., i, 1] ** 2)


def polar_index(family: MomentumFamily, branch: str) -> int:
    """Which Killing field survives on the polar submanifold over a ray."""
    if branch not in ("left", "right"):
        raise ValueError(f"branch must be 'left' or 'right', got {branch!r}")
    if family.kind in ("general", "taub_nut"):
        return 1 if branch == "left" else 0
    return 0


def killing_norm_polar(family: MomentumFamily, branch: str, x):
    """y -> 0+ limit of |X^i|^2 on the polar submanifold over the left or right ray."""
    i = polar_index(family, branch)
    x = np.asarray(x, dtype=float)
    lo, hi = family.centers.min(), family.centers.max()
    if (branch == "left" and np.any(x >= lo)) or (branch == "right" and np.any(x <= hi)):
        raise ValueError(f"x must lie beyond the outermost Lipschitz point on the {branch} side")
    a = family.jacobian(x, np.zeros_like(x))
    dd = family.boundary_ddy(x)
    # det A = y (A11 d_y A22 - A21 d_y A12) + O(y^2) on the boundary
    slope = a[..., 0, 0] * dd[..., 1] - a[..., 1, 0] * dd[..., 0]
    out = a[..., i, 0] ** 2 / np.abs(slope)
    return float(out) if out.ndim == 0 else out


def killing_comparison(family_a, family_b, x, y, i: int):
    """Both sides of | |X|_a - |X|_b | <= q |X|_b at the given points."""
    na = np.sqrt(killing_norm(family_a, x, y, i))
    nb = np.sqrt(killing_norm(family_b, x, y, i))
    q = comparison_quotient(family_a, family_b, x, y)
    return np.abs(na - nb), q * nb


@dataclass(frozen=True)
class PolarProfile:
    r: np.ndarray
    norm: np.ndarray
    curvature: np.ndarray | None = None

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        norm = np.asarray(self.norm, dtype=float)
        if r.ndim != 1 or r.shape != norm.shape:
            raise ValueError("radii and norms must be matching 1D arrays")
        if np.any(np.diff(r) <= 0):
            raise ValueError("radial samples must be strictly increasing")
        if np.any(norm < 0):
            raise ValueError("Killing norms are non-negative")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "norm", norm)
        if self.curvature is not None:
            object.__setattr__(self, "curvature", np.asarray(self.curvature, dtype=float))


@dataclass(frozen=True)
class ClosednessVerdict:
    decay_ok: bool
    C1: float
    curvature_ok: bool | None
    tail: tuple[float, float]
    threshold: float = CLOSEDNESS_THRESHOLD

    @property
    def closed(self) -> bool:
        return self.decay_ok or bool(self.curvature_ok)


def closedness_criteria(profile: PolarProfile, threshold=CLOSEDNESS_THRESHOLD) -> ClosednessVerdict:
    """Check |X| >= C_1 / r and K >= -2 / r^2 over the sampled tail."""
    if profile.r.size == 0:
        raise ValueError("empty tail")
    if profile.r.size < 3:
        raise ValueError(f"need at least 3 tail samples, got {profile.r.size}")
    c1 = float(np.min(profile.norm * np.abs(profile.r)))
    curv = None
    if profile.curvature is not None:
        curv = bool(np.all(profile.curvature >= -2.0 / profile.r**2))
    return ClosednessVerdict(c1 > threshold, c1, curv, (float(profile.r[0]), float(profile.r[-1])), threshold)


def model_pair(poly: LabeledPolygon):
    from .momentum import family_for

    return family_for(poly), model_for(poly)


__all__ = [
    "ZeroSignalError", "comparison_quotient", "det_ratio_deviation", "leading_coefficient",
    "rs_leading_coefficient", "DecayFit", "fit_decay", "ray_points", "killing_norm",
    "killing_norm_polar", "killing_comparison", "polar_index", "PolarProfile",
    "ClosednessVerdict", "closedness_criteria", "model_pair",
]
