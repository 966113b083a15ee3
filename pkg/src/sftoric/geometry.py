"""Reduced and four-dimensional geometry of toric metrics.

Everything here works on a *chart*: coordinates ``u`` on the reduced
surface together with the momentum Jacobian ``A = d phi / d u`` and the
reduced metric ``G_ij`` in momentum coordinates.  Two charts exist:

* ``FamilyChart`` for the closed-form momentum families, with ``u = (x, y)``
  on the upper half-plane;
* ``PotentialChart`` for Hessian metrics of a symplectic potential, with
  ``u = phi`` and ``A`` the identity.

Derivatives in momentum coordinates are central differences in ``u``
pushed through ``A^{-1}``.  All 2x2 algebra is written out by hand so
that every array element is computed by the same sequence of floating
point operations whatever the batch shape.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .momentum import MomentumFamily

DEFAULT_STEP = 1e-3


class StencilError(ValueError):
    """A finite-difference stencil would leave the domain of the chart."""


# ---------------------------------------------------------------- 2x2 algebra

def det2(a):
    return a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]


def inv2(a):
    d = det2(a)
    out = np.empty(a.shape)
    out[..., 0, 0] = a[..., 1, 1] / d
    out[..., 0, 1] = -a[..., 0, 1] / d
    out[..., 1, 0] = -a[..., 1, 0] / d
    out[..., 1, 1] = a[..., 0, 0] / d
    return out


def mul2(a, b):
    out = np.empty(np.broadcast_shapes(a.shape, b.shape))
    for i in range(2):
        for j in range(2):
            out[..., i, j] = a[..., i, 0] * b[..., 0, j] + a[..., i, 1] * b[..., 1, j]
    return out


def sym_outer(a):
    """A A^T for a batch of 2x2 matrices."""
    out = np.empty(a.shape)
    out[..., 0, 0] = a[..., 0, 0] * a[..., 0, 0] + a[..., 0, 1] * a[..., 0, 1]
    out[..., 1, 1] = a[..., 1, 0] * a[..., 1, 0] + a[..., 1, 1] * a[..., 1, 1]
    out[..., 0, 1] = a[..., 0, 0] * a[..., 1, 0] + a[..., 0, 1] * a[..., 1, 1]
    out[..., 1, 0] = out[..., 0, 1]
    return out


def _scalar(v):
    v = np.asarray(v)
    return float(v) if v.ndim == 0 else v


# --------------------------------------------------------------------- charts

class FamilyChart:
    """Half-plane chart of a closed-form momentum family."""

    def __init__(self, family: MomentumFamily):
        self.family = family

    def check(self, u, reach):
        y = np.asarray(u)[..., 1]
        if np.any(y - reach <= 0.0):
            raise StencilError(
                f"stencil of reach {reach:g} crosses y = 0 (min y = {float(np.min(y)):g}); "
                "need y > 2h"
            )

    def phi(self, u):
        return self.family.phi(u[..., 0], u[..., 1])

    def jac(self, u):
        return self.family.jacobian(u[..., 0], u[..., 1])

    def metric_up(self, u):
        a = self.jac(u)
        f = u[..., 1] / np.abs(det2(a))
        return f[..., None, None] * sym_outer(a)

    def metric_dn(self, u):
        return inv2(self.metric_up(u))

    def surface_metric(self, u):
        """g_Sigma in the chart: lambda (dx^2 + dy^2)."""
        lam = np.abs(det2(self.jac(u))) / u[..., 1]
        out = np.zeros(lam.shape + (2, 2))
        out[..., 0, 0] = lam
        out[..., 1, 1] = lam
        return out


class PotentialChart:
    """Momentum-coordinate chart of a Hessian metric G_ij = Hess G."""

    def __init__(self, potential):
        self.potential = potential

    def check(self, u, reach):
        u = np.asarray(u)
        for du in ((reach, 0.0), (-reach, 0.0), (0.0, reach), (0.0, -reach)):
            if not np.all(self.potential.contains(u + np.asarray(du))):
                raise StencilError(f"stencil of reach {reach:g} leaves the potential's domain")

    def phi(self, u):
        return np.asarray(u, dtype=float)

    def jac(self, u):
        out = np.zeros(np.shape(u)[:-1] + (2, 2))
        out[..., 0, 0] = 1.0
        out[..., 1, 1] = 1.0
        return out

    def metric_dn(self, u):
        return self.potential.hessian(u)

    def metric_up(self, u):
        return inv2(self.metric_dn(u))

    def surface_metric(self, u):
        return self.metric_dn(u)


def as_chart(obj):
    if isinstance(obj, (FamilyChart, PotentialChart)):
        return obj
    if isinstance(obj, MomentumFamily):
        return FamilyChart(obj)
    if hasattr(obj, "hessian"):
        return PotentialChart(obj)
    raise TypeError(f"cannot build a chart from {type(obj).__name__}")


def _points(u):
    return np.asarray(u, dtype=float)


# ------------------------------------------------------------ finite differences

def fd(fn, u, h):
    """Central first derivatives in chart coordinates, appended as a last axis."""
    e0 = np.array([h, 0.0])
    e1 = np.array([0.0, h])
    d0 = (fn(u + e0) - fn(u - e0)) / (2.0 * h)
    d1 = (fn(u + e1) - fn(u - e1)) / (2.0 * h)
    return np.stack([d0, d1], axis=-1)


def fd4(fn, u, h):
    """Fourth-order central first derivatives (five-point stencil, reach 2h)."""
    out = []
    for e in (np.array([h, 0.0]), np.array([0.0, h])):
        out.append((8.0 * (fn(u + e) - fn(u - e)) - (fn(u + 2 * e) - fn(u - 2 * e))) / (12.0 * h))
    return np.stack(out, axis=-1)


def to_phi(du, ainv):
    """Turn a chart gradient (last axis) into a momentum-coordinate gradient."""
    extra = du.ndim - ainv.ndim + 1     # tensor axes of the field
    ai = ainv.reshape(ainv.shape[:-2] + (1,) * extra + (2, 2))
    out = np.empty(du.shape)
    out[..., 0] = du[..., 0] * ai[..., 0, 0] + du[..., 1] * ai[..., 1, 0]
    out[..., 1] = du[..., 0] * ai[..., 0, 1] + du[..., 1] * ai[..., 1, 1]
    return out


def grad_phi(chart, fn, u, h):
    return to_phi(fd(fn, u, h), inv2(chart.jac(u)))


def divergence_phi(chart, fn, u, h):
    """sum_i d W^i / d phi^i for a vector field ``fn`` (last axis i)."""
    d = grad_phi(chart, fn, u, h)
    return d[..., 0, 0] + d[..., 1, 1]


def volume(chart, u):
    return det2(chart.metric_up(u))


# ---------------------------------------------------------------- metric blocks

@dataclass(frozen=True)
class MetricBlocks:
    G_dn: np.ndarray
    G_up: np.ndarray
    V: np.ndarray
    lam: np.ndarray


def metric_blocks(family: MomentumFamily, x, y) -> MetricBlocks:
    """Reduced metric data at interior half-plane points (vectorized)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise ValueError("reduced metric needs interior points (y > 0)")
    a = family.jacobian(x, y)
    d = np.abs(det2(a))
    if np.any(d == 0):
        k = np.argwhere(np.broadcast_to(d == 0, d.shape))[0]
        raise ValueError(f"singular Jacobian at grid index {tuple(int(i) for i in k)}")
    g_up = (y / d)[..., None, None] * sym_outer(a)
    return MetricBlocks(inv2(g_up), g_up, det2(g_up), d / y)


def reduced_metric(family: MomentumFamily, pt) -> MetricBlocks:
    x, y = (pt.x, pt.y) if hasattr(pt, "x") else pt
    b = metric_blocks(family, x, y)
    return MetricBlocks(b.G_dn, b.G_up, float(b.V), float(b.lam))


# ------------------------------------------------------------- scalar curvature

@dataclass(frozen=True)
class ScalarCurvature:
    """Two finite-difference evaluations of the scalar curvature.

    ``s`` is ``-d_i (G^ij d_j log V)``, the scalar curvature of the
    four-manifold.  ``abreu`` is ``-1/2 d_i d_j G^ij``.  In exact arithmetic
    ``s = 2 * abreu``; ``ratio`` reports the observed value.
    """

    s: np.ndarray | float
    abreu: np.ndarray | float

    @property
    def ratio(self):
        return self.s / self.abreu

    @property
    def kahler(self):
        """Half the Riemannian value, the normalization of the disk example."""
        return self.s / 2


def scalar_curvature_4d(metric, u, h=DEFAULT_STEP) -> ScalarCurvature:
    chart = as_chart(metric)
    u = _points(u)
    chart.check(u, 2 * h)

    def w(v):
        # G^{ij} d_j log V, with d log V = dV / V (V is smoother than log V)
        g = chart.metric_up(v)
        dlv = grad_phi(chart, lambda t: volume(chart, t), v, h) / volume(chart, v)[..., None]
        return np.stack(
            [g[..., i, 0] * dlv[..., 0] + g[..., i, 1] * dlv[..., 1] for i in range(2)], axis=-1
        )

    def div_rows(v):
        d = grad_phi(chart, chart.metric_up, v, h)   # (..., i, j, s)
        return np.stack([d[..., i, 0, 0] + d[..., i, 1, 1] for i in range(2)], axis=-1)

    s = -divergence_phi(chart, w, u, h)
    abreu = -0.5 * divergence_phi(chart, div_rows, u, h)
    return ScalarCurvature(_scalar(s), _scalar(abreu))


# ------------------------------------------------------------------ Christoffels

@dataclass(frozen=True)
class Christoffels:
    """Gamma^k_ij stored as ``gamma[..., k, i, j]`` and the trace Gamma^k."""

    gamma: np.ndarray
    trace: np.ndarray
    log_volume_side: np.ndarray
    residual: np.ndarray | float


def _christoffel_parts(chart, u, h):
    g_up = chart.metric_up(u)
    g_dn = chart.metric_dn(u)
    ainv = inv2(chart.jac(u))
    # fourth-order stencil: these symbols enter identities checked at fixed h
    dg = to_phi(fd4(chart.metric_dn, u, h), ainv)             # (..., i, j, s)
    gam = np.zeros(u.shape[:-1] + (2, 2, 2))
    for k in range(2):
        for i in range(2):
            for j in range(2):
                gam[..., k, i, j] = 0.5 * (
                    dg[..., i, j, 0] * g_up[..., 0, k] + dg[..., i, j, 1] * g_up[..., 1, k]
                )
    trace = np.zeros(u.shape[:-1] + (2,))
    for k in range(2):
        for i in range(2):
            for j in range(2):
                trace[..., k] += g_up[..., i, j] * gam[..., k, i, j]
    v = volume(chart, u)
    dhalf = 0.5 * to_phi(fd4(lambda t: volume(chart, t), u, h), ainv) / v[..., None]
    rhs = -np.stack(
        [g_up[..., k, 0] * dhalf[..., 0] + g_up[..., k, 1] * dhalf[..., 1] for k in range(2)],
        axis=-1,
    )
    return g_up, g_dn, gam, trace, rhs, dhalf


def christoffels(metric, u, h=DEFAULT_STEP) -> Christoffels:
    chart = as_chart(metric)
    u = _points(u)
    chart.check(u, 2 * h)
    _, _, gam, trace, rhs, _ = _christoffel_parts(chart, u, h)
    res = np.max(np.abs(trace - rhs), axis=-1)
    return Christoffels(gam, trace, rhs, _scalar(res))


def gamma_norm_sq(g_up, g_dn, gam):
    """|Gamma|^2 = G^is G^jt G_kl Gamma^k_ij Gamma^l_st."""
    out = np.zeros(gam.shape[:-3])
    r = range(2)
    for i in r:
        for j in r:
            for s in r:
                for t in r:
                    gg = g_up[..., i, s] * g_up[..., j, t]
                    for k in r:
                        for l in r:
                            out += gg * g_dn[..., k, l] * gam[..., k, i, j] * gam[..., l, s, t]
    return out


def sigma_scalar(metric, u, h=DEFAULT_STEP):
    """Gaussian curvature K of the reduced surface from Christoffel symbols."""
    chart = as_chart(metric)
    u = _points(u)
    chart.check(u, 2 * h)
    g_up, g_dn, gam, _, _, dhalf = _christoffel_parts(chart, u, h)
    grad_sq = (
        g_up[..., 0, 0] * dhalf[..., 0] ** 2
        + 2 * g_up[..., 0, 1] * dhalf[..., 0] * dhalf[..., 1]
        + g_up[..., 1, 1] * dhalf[..., 1] ** 2
    )
    s_sigma = gamma_norm_sq(g_up, g_dn, gam) - grad_sq
    return _scalar(s_sigma / 2)


# ---------------------------------------------------------- Gaussian curvature

def gaussian_curvature(family: MomentumFamily, pt, h=DEFAULT_STEP):
    """K = -(1 / 2 lambda) Laplacian(log lambda) in the isothermal (x, y) chart.

    The Laplacian uses the fourth-order nine-point cross stencil (reach 2h).
    """
    chart = as_chart(family)
    u = _points(pt)
    chart.check(u, 2 * h)

    def loglam(v):
        return np.log(np.abs(det2(chart.jac(v))) / v[..., 1])

    c = loglam(u)
    lap = -60.0 * c
    for e in (np.array([h, 0.0]), np.array([0.0, h])):
        lap = lap + 16.0 * (loglam(u + e) + loglam(u - e)) - (loglam(u + 2 * e) + loglam(u - 2 * e))
    lap = lap / (12.0 * h * h)
    return _scalar(-lap / (2.0 * np.exp(c)))


def surface_curvature(metric_fn, u, h=DEFAULT_STEP):
    """Gaussian curvature of an arbitrary 2D metric ``g_ab(u)`` by nested differences."""
    u = _points(u)

    def christ(v):
        g = metric_fn(v)
        gi = inv2(g)
        dg = fd(metric_fn, v, h)          # (..., a, b, c) = d_c g_ab
        out = np.zeros(v.shape[:-1] + (2, 2, 2))
        for a in range(2):
            for b in range(2):
                for c in range(2):
                    for d in range(2):
                        out[..., a, b, c] += 0.5 * gi[..., a, d] * (
                            dg[..., d, c, b] + dg[..., d, b, c] - dg[..., b, c, d]
                        )
        return out

    gam = christ(u)
    dgam = fd(christ, u, h)                # (..., a, b, c, e) = d_e Gamma^a_bc
    riem = np.zeros(u.shape[:-1] + (2,))   # R^a_{212}
    for a in range(2):
        riem[..., a] = dgam[..., a, 1, 1, 0] - dgam[..., a, 0, 1, 1]
        for e in range(2):
            riem[..., a] += gam[..., a, 0, e] * gam[..., e, 1, 1] - gam[..., a, 1, e] * gam[..., e, 0, 1]
    g = metric_fn(u)
    r1212 = g[..., 0, 0] * riem[..., 0] + g[..., 0, 1] * riem[..., 1]
    return _scalar(r1212 / det2(g))


def constant_volume_curvature(metric, u, h=DEFAULT_STEP):
    """4 |grad |grad phi^1||^2, the surface curvature when V is constant."""
    chart = as_chart(metric)
    u = _points(u)
    chart.check(u, h)
    norm1 = lambda v: np.sqrt(chart.metric_up(v)[..., 0, 0])
    d = grad_phi(chart, norm1, u, h)
    g = chart.metric_up(u)
    q = g[..., 0, 0] * d[..., 0] ** 2 + 2 * g[..., 0, 1] * d[..., 0] * d[..., 1] + g[..., 1, 1] * d[..., 1] ** 2
    return _scalar(4 * q)


@dataclass(frozen=True)
class ConformalScalar:
    via_christoffels: np.ndarray | float
    via_surface: np.ndarray | float

    @property
    def residual(self):
        return abs(self.via_christoffels - self.via_surface)


def richardson(at_h, at_half):
    """Cancel the h^2 error term of two central-difference results at h and h/2."""
    return (4 * np.asarray(at_half) - np.asarray(at_h)) / 3


def conformal_scalar(metric, u, h=DEFAULT_STEP, extrapolate=False) -> ConformalScalar:
    """Scalar curvature of V^{1/2} g_Sigma, computed two ways.

    (a) ``V^{-1/2} (|Gamma|^2 + s / 2)`` from Christoffel symbols and the
    four-dimensional scalar curvature; (b) twice the Gaussian curvature of
    the rescaled surface metric.  With ``extrapolate`` both are evaluated at
    ``h`` and ``h / 2`` and combined by Richardson extrapolation.
    """
    if extrapolate:
        c1 = conformal_scalar(metric, u, h)
        c2 = conformal_scalar(metric, u, h / 2)
        return ConformalScalar(
            _scalar(richardson(c1.via_christoffels, c2.via_christoffels)),
            _scalar(richardson(c1.via_surface, c2.via_surface)),
        )
    chart = as_chart(metric)
    u = _points(u)
    chart.check(u, 2 * h)
    g_up, g_dn, gam, _, _, _ = _christoffel_parts(chart, u, h)
    s = scalar_curvature_4d(chart, u, h).s
    a = (gamma_norm_sq(g_up, g_dn, gam) + np.asarray(s) / 2) / np.sqrt(volume(chart, u))

    def tilde(v):
        return np.sqrt(volume(chart, v))[..., None, None] * chart.surface_metric(v)

    b = 2 * np.asarray(surface_curvature(tilde, u, h))
    return ConformalScalar(_scalar(a), _scalar(b))


# ---------------------------------------------------------------- field samples

@dataclass(frozen=True)
class GridSpec:
    x_min: float = -5.0
    x_max: float = 5.0
    y_min: float = 0.1
    y_max: float = 10.0
    nx: int = 50
    ny: int = 50
    h: float = DEFAULT_STEP

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise ValueError(f"grid counts must be at least 3, got {self.nx}x{self.ny}")
        if not self.h > 0:
            raise ValueError(f"finite-difference step must be positive, got {self.h}")
        if self.y_min < 2 * self.h:
            raise ValueError(
                f"grid clearance: y_min = {self.y_min} is below 2h = {2 * self.h}"
            )
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("grid ranges must be non-empty")

    def axes(self):
        return (np.linspace(self.x_min, self.x_max, self.nx),
                np.linspace(self.y_min, self.y_max, self.ny))

    def points(self):
        """Grid points in y-outer, x-inner order, shape (ny, nx, 2)."""
        xs, ys = self.axes()
        X, Y = np.meshgrid(xs, ys)
        return np.stack([X, Y], axis=-1)


@dataclass(frozen=True)
class FieldSample:
    point: np.ndarray
    phi: np.ndarray
    jacobian: np.ndarray
    detA: np.ndarray
    blocks: MetricBlocks
    K_sigma: np.ndarray
    s: np.ndarray
    s_sigma: np.ndarray
    s_tilde: np.ndarray
    wminus_sq: np.ndarray
    quotient: np.ndarray | None = None


def field_sample(family: MomentumFamily, u, h=DEFAULT_STEP, model: MomentumFamily | None = None):
    """Evaluate every geometric quantity at the points ``u`` (shape ``(..., 2)``)."""
    u = _points(u)
    chart = FamilyChart(family)
    a = chart.jac(u)
    blocks = metric_blocks(family, u[..., 0], u[..., 1])
    k = np.asarray(gaussian_curvature(family, u, h))
    s = np.asarray(scalar_curvature_4d(chart, u, h).s)
    g_up, g_dn, gam, _, _, _ = _christoffel_parts(chart, u, h)
    s_tilde = (gamma_norm_sq(g_up, g_dn, gam) + s / 2) / np.sqrt(blocks.V)
    q = None
    if model is not None:
        from .asymptotics import comparison_quotient
        q = comparison_quotient(family, model, u[..., 0], u[..., 1])
    return FieldSample(
        u, chart.phi(u), a, det2(a), blocks, k, s, 2 * k, s_tilde, 24 * k * k, q
    )


__all__ = [
    "DEFAULT_STEP", "StencilError", "FamilyChart", "PotentialChart", "as_chart",
    "MetricBlocks", "metric_blocks", "reduced_metric", "ScalarCurvature",
    "scalar_curvature_4d", "Christoffels", "christoffels", "sigma_scalar",
    "gaussian_curvature", "surface_curvature", "constant_volume_curvature",
    "ConformalScalar", "conformal_scalar", "richardson", "GridSpec", "FieldSample", "field_sample",
    "fd", "fd4", "to_phi", "grad_phi", "volume", "det2", "inv2", "mul2",
]
