"""Labeled reduction polygons: data model, validation and classification.

A labeled polygon is the boundary datum from which a scalar-flat toric
metric family is built.  The Lipschitz points ``x_1 < ... < x_d`` on the
boundary of the upper half-plane are sent to the vertices ``p_i`` in the
momentum plane; the two unbounded ends follow rays with labels ``s_0`` and
``s_d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

FAMILIES = ("general", "parallel_ray", "taub_nut", "r2s2_model")
KINDS = ("general", "parallel_ray", "half_plane", "strip", "plane", "compact")
ASYMPTOTIC_FAMILIES = ("ALE", "ALF", "ALF_like", "Exceptional", "R2xS2", "none")

CROSS_TOL = 1e-10

# Outward unit direction of each boundary ray, per family, before scaling by
# the ray label.  The left ray leaves p_1 as x decreases; the right ray leaves
# p_d as x increases.
_RAY_DIRECTIONS = {
    "general": ((0.0, 1.0), (1.0, 0.0)),
    "taub_nut": ((0.0, 1.0), (1.0, 0.0)),
    "parallel_ray": ((1.0, 0.0), (1.0, 0.0)),
    "r2s2_model": ((1.0, 0.0), (1.0, 0.0)),
}


class PolygonError(ValueError):
    """Raised when an operation needs a valid polygon and gets an invalid one."""


@dataclass(frozen=True)
class LabeledPolygon:
    """Input datum of a metric family.

    ``boundary_lines`` only matters for the degenerate ``d = 0`` inputs,
    where it distinguishes the plane (0), the half-plane (1) and the
    strip (2).
    """

    lipschitz_points: tuple[float, ...]
    vertices: tuple[tuple[float, float], ...]
    s0: float = 1.0
    sd: float = 1.0
    alpha: float = 0.0
    beta: float = 0.0
    family: str = "general"
    boundary_lines: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lipschitz_points", tuple(float(v) for v in self.lipschitz_points))
        object.__setattr__(
            self, "vertices", tuple((float(p[0]), float(p[1])) for p in self.vertices)
        )

    @property
    def d(self) -> int:
        return len(self.lipschitz_points)

    @classmethod
    def taub_nut(cls, alpha=0.0, beta=0.0, s0=1.0, sd=1.0) -> "LabeledPolygon":
        """The wedge with its single vertex at the origin and x_1 = 0."""
        return cls((0.0,), ((0.0, 0.0),), s0, sd, alpha, beta, "taub_nut")

    @classmethod
    def h2s2(cls) -> "LabeledPolygon":
        """Half-strip of the product of the hyperbolic plane and the round sphere.

        Vertices follow the increasing-x convention: x = -1 maps to (1, -1)
        and x = 1 maps to (1, 1).
        """
        return cls((-1.0, 1.0), ((1.0, -1.0), (1.0, 1.0)), 1.0, 1.0, 0.0, 0.0, "r2s2_model")

    def with_family(self, family: str) -> "LabeledPolygon":
        return LabeledPolygon(
            self.lipschitz_points, self.vertices, self.s0, self.sd,
            self.alpha, self.beta, family, self.boundary_lines,
        )


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    errors: tuple[str, ...]
    warnings: tuple[str, ...]
    edge_labels: tuple[float, ...]
    convex: bool | None

    def raise_if_invalid(self):
        if not self.ok:
            raise PolygonError("; ".join(self.errors))


@dataclass(frozen=True)
class PolygonClass:
    kind: str
    asymptotic_family: str = "none"


def edge_labels(poly: LabeledPolygon) -> tuple[float, ...]:
    """s_i = |p_{i+1} - p_i| / (x_{i+1} - x_i) for each interior edge."""
    x = poly.lipschitz_points
    p = poly.vertices
    return tuple(
        math.hypot(p[i + 1][0] - p[i][0], p[i + 1][1] - p[i][1]) / (x[i + 1] - x[i])
        for i in range(len(x) - 1)
    )


def ray_directions(poly: LabeledPolygon) -> tuple[np.ndarray, np.ndarray]:
    """Outward directions of the left and right rays, scaled by s_0 and s_d."""
    left, right = _RAY_DIRECTIONS[poly.family]
    return poly.s0 * np.array(left), poly.sd * np.array(right)


def _unit(v):
    n = math.hypot(v[0], v[1])
    return (v[0] / n, v[1] / n)


def polyline_convexity(left_ray, vertices, right_ray, tol=CROSS_TOL):
    """Decide convexity of an open boundary polyline.

    The polyline comes in from infinity against ``left_ray``, visits the
    vertices in order and leaves along ``right_ray``.  It is convex when
    every turn has the same orientation and the total turning does not
    exceed a half-turn.  Returns ``(convex, n_collinear)``.
    """
    dirs = [_unit((-left_ray[0], -left_ray[1]))]
    for a, b in zip(vertices[:-1], vertices[1:]):
        dirs.append(_unit((b[0] - a[0], b[1] - a[1])))
    dirs.append(_unit((right_ray[0], right_ray[1])))

    signs = set()
    collinear = 0
    turning = 0.0
    for u, v in zip(dirs[:-1], dirs[1:]):
        cross = u[0] * v[1] - u[1] * v[0]
        dot = u[0] * v[0] + u[1] * v[1]
        if abs(cross) <= tol:
            if dot < 0:
                # a full reversal folds the boundary back onto itself
                signs.add(0)
            else:
                collinear += 1
            continue
        signs.add(1 if cross > 0 else -1)
        turning += math.atan2(abs(cross), dot)
    convex = 0 not in signs and len(signs) <= 1 and turning <= math.pi + 1e-9
    return convex, collinear


def validate_polygon(poly: LabeledPolygon) -> ValidationReport:
    errors: list[str] = []
    warnings: list[str] = []
    x = poly.lipschitz_points
    p = poly.vertices

    if poly.family not in FAMILIES:
        errors.append(f"family: unknown tag {poly.family!r}, expected one of {', '.join(FAMILIES)}")
    for i, v in enumerate(x):
        if not math.isfinite(v):
            errors.append(f"lipschitz_points[{i}]: not finite")
    for i in range(1, len(x)):
        if not x[i] > x[i - 1]:
            errors.append(f"lipschitz_points[{i}]: not strictly increasing")
    if len(p) != len(x):
        errors.append(f"vertices: expected {len(x)} entries, got {len(p)}")
    for i, v in enumerate(p):
        if not (math.isfinite(v[0]) and math.isfinite(v[1])):
            errors.append(f"vertices[{i}]: not finite")
    for i in range(1, min(len(p), len(x))):
        if p[i] == p[i - 1]:
            errors.append(f"vertices[{i}]: coincides with vertices[{i - 1}]")
    for name in ("s0", "sd"):
        v = getattr(poly, name)
        if not (math.isfinite(v) and v > 0):
            errors.append(f"{name}: ray label must be positive, got {v}")
    for name in ("alpha", "beta"):
        v = getattr(poly, name)
        if not (math.isfinite(v) and v >= 0):
            errors.append(f"{name}: free parameter must be non-negative, got {v}")
    if poly.family == "r2s2_model" and len(x) != 2:
        errors.append(f"lipschitz_points: r2s2_model needs exactly 2 points, got {len(x)}")
    if poly.family == "taub_nut" and len(x) != 1:
        errors.append(f"lipschitz_points: taub_nut needs exactly 1 point, got {len(x)}")
    if poly.family in ("parallel_ray", "r2s2_model") and len(x) < 2:
        errors.append("lipschitz_points: parallel rays need at least 2 points")
    if poly.d == 0 and poly.boundary_lines not in (0, 1, 2):
        errors.append(f"boundary_lines: expected 0, 1 or 2, got {poly.boundary_lines}")

    if errors:
        return ValidationReport(False, tuple(errors), tuple(warnings), (), None)

    labels = edge_labels(poly)
    convex = None
    if poly.d >= 1:
        left, right = ray_directions(poly)
        convex, collinear = polyline_convexity(left, p, right)
        if collinear:
            warnings.append(f"{collinear} collinear turn(s): adjacent edges merge")
        if not convex:
            errors.append("vertices: boundary polyline is not convex")
    return ValidationReport(not errors, tuple(errors), tuple(warnings), labels, convex)


def classify_asymptotic_family(alpha: float, beta: float) -> str:
    if alpha < 0 or beta < 0:
        raise ValueError(f"free parameters must be non-negative, got ({alpha}, {beta})")
    if alpha == 0 and beta == 0:
        return "ALE"
    if alpha == 0 or beta == 0:
        return "Exceptional"
    if alpha == beta:
        return "ALF"
    return "ALF_like"


def classify_polygon(poly: LabeledPolygon) -> PolygonClass:
    if poly.d == 0:
        return PolygonClass(("plane", "half_plane", "strip")[poly.boundary_lines])
    validate_polygon(poly).raise_if_invalid()
    left, right = ray_directions(poly)
    cross = left[0] * right[1] - left[1] * right[0]
    dot = float(left @ right)
    if abs(cross) > CROSS_TOL * np.hypot(*left) * np.hypot(*right):
        return PolygonClass("general", classify_asymptotic_family(poly.alpha, poly.beta))
    if dot > 0:
        return PolygonClass("parallel_ray", "R2xS2")
    return PolygonClass("half_plane")


def boundary_image(poly: LabeledPolygon, x):
    """Image of the boundary point(s) ``(x, 0)`` in the momentum plane."""
    from .momentum import family_for

    fam = family_for(poly)
    return fam.phi(np.asarray(x, dtype=float), 0.0)


__all__ = [
    "FAMILIES", "LabeledPolygon", "ValidationReport", "PolygonClass", "PolygonError",
    "validate_polygon", "classify_polygon", "classify_asymptotic_family",
    "boundary_image", "edge_labels", "ray_directions", "polyline_convexity",
]
