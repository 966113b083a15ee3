"""Symplectic potentials, Legendre duality and the disk example.

A symplectic potential ``G(phi)`` is a convex function whose Hessian is the
reduced metric ``G_ij``.  Its Legendre dual ``F(xi)`` is the Kähler
potential, and the two are linked by the hodograph relations
``xi = grad G(phi)`` and ``phi = grad F(xi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate

from .geometry import DEFAULT_STEP, PotentialChart, StencilError, fd, inv2

DISK_MARGIN = 1e-3


class NonConvexError(ValueError):
    """The potential's Hessian is not positive definite somewhere on the grid."""


class DomainError(ValueError):
    """A point or segment lies outside the potential's domain."""


@dataclass(frozen=True, eq=False)
class SymplecticPotential:
    """A convex potential with optional closed-form derivatives.

    ``value`` maps an array of points of shape ``(..., 2)`` to ``(...)``.
    Missing ``gradient`` or ``hessian`` callables fall back to central
    differences with step ``fd_step``.
    """

    value: Callable
    gradient_fn: Callable | None = None
    hessian_fn: Callable | None = None
    domain: Callable | None = None
    name: str = "potential"
    fd_step: float = 1e-4

    def __call__(self, phi):
        return self.value(np.asarray(phi, dtype=float))

    def contains(self, phi):
        phi = np.asarray(phi, dtype=float)
        if self.domain is None:
            return np.ones(phi.shape[:-1], dtype=bool)
        return self.domain(phi)

    def gradient(self, phi):
        phi = np.asarray(phi, dtype=float)
        if self.gradient_fn is not None:
            return self.gradient_fn(phi)
        return fd(self.value, phi, self.fd_step)

    def hessian(self, phi):
        phi = np.asarray(phi, dtype=float)
        if self.hessian_fn is not None:
            return self.hessian_fn(phi)
        h = fd(self.gradient, phi, self.fd_step)
        return 0.5 * (h + np.swapaxes(h, -1, -2))


def quadratic_potential(matrix=((1.0, 0.0), (0.0, 1.0))) -> SymplecticPotential:
    """G = 1/2 <phi, M phi> for a constant symmetric M."""
    m = np.asarray(matrix, dtype=float)
    return SymplecticPotential(
        lambda p: 0.5 * np.einsum("...i,ij,...j->...", p, m, p),
        lambda p: p @ m.T,
        lambda p: np.broadcast_to(m, p.shape[:-1] + (2, 2)).copy(),
        name="quadratic",
    )


def linear_potential(c=(1.0, 1.0)) -> SymplecticPotential:
    c = np.asarray(c, dtype=float)
    return SymplecticPotential(
        lambda p: p @ c,
        lambda p: np.broadcast_to(c, p.shape).copy(),
        lambda p: np.zeros(p.shape[:-1] + (2, 2)),
        name="linear",
    )


# ------------------------------------------------------------------- the disk

def _rho2(p):
    return p[..., 0] ** 2 + p[..., 1] ** 2


def _disk_hessian(p):
    r2 = _rho2(p)
    w = 1.0 - r2
    out = np.empty(p.shape[:-1] + (2, 2))
    for i in range(2):
        for j in range(2):
            out[..., i, j] = 2 * p[..., i] * p[..., j] / w**2
        out[..., i, i] += 1.0 / w
    return out


def disk_potential() -> SymplecticPotential:
    """G = -1/2 log(1 - |phi|^2) on the open unit disk."""
    return SymplecticPotential(
        lambda p: -0.5 * np.log1p(-_rho2(p)),
        lambda p: p / (1.0 - _rho2(p))[..., None],
        _disk_hessian,
        lambda p: _rho2(p) < 1.0,
        name="disk",
    )


def disk_R(rho):
    """Closed-form scalar curvature of the disk metric."""
    r2 = np.asarray(rho, dtype=float) ** 2
    return 4 * (2 - 4 * r2 - 3 * r2**2 - r2**3) / (1 + r2) ** 3


def disk_curvature_norm(rho):
    """Curvature norm *(Omega ^ *Omega) of the disk metric as a rational function of rho."""
    r2 = np.asarray(rho, dtype=float) ** 2
    num = 3 - 10 * r2 + 29 * r2**2 + 24 * r2**3 + 19 * r2**4 + 6 * r2**5 + r2**6
    return 32 * num / (1 + r2) ** 6


@dataclass(frozen=True)
class DiskValues:
    G: float
    G_ij: np.ndarray
    R: float
    curvature_norm: float


def disk_example(phi1: float, phi2: float) -> DiskValues:
    p = np.array([phi1, phi2], dtype=float)
    rho = math.hypot(phi1, phi2)
    if rho >= 1.0:
        raise DomainError(f"|phi| = {rho} is outside the unit disk")
    pot = disk_potential()
    return DiskValues(float(pot(p)), pot.hessian(p), float(disk_R(rho)), float(disk_curvature_norm(rho)))


# ----------------------------------------------------------- Legendre duality

@dataclass(frozen=True, eq=False)
class LegendrePair:
    """Samples of G on a phi-grid and of its conjugate F at xi = grad G(phi)."""

    phi: np.ndarray
    G: np.ndarray
    xi: np.ndarray
    F: np.ndarray
    potential: SymplecticPotential

    def conjugate_at(self, xi, start=None, steps=30):
        """F(xi) = sup_phi <xi, phi> - G(phi), grid sup followed by Newton polish."""
        xi = np.atleast_2d(np.asarray(xi, dtype=float))
        if start is None:
            start = _grid_argmax(xi, self.phi, self.G)
        return _newton_polish(self.potential, xi, np.array(start, dtype=float), steps)

    def conjugate(self) -> SymplecticPotential:
        """F as a potential in its own right: grad F = phi(xi), Hess F = (Hess G)^{-1}."""
        pair = self

        def phi_of(xi):
            flat = xi.reshape(-1, 2)
            _, p = pair.conjugate_at(flat)
            return p.reshape(xi.shape)

        def value(xi):
            flat = xi.reshape(-1, 2)
            f, _ = pair.conjugate_at(flat)
            return f.reshape(xi.shape[:-1])

        return SymplecticPotential(
            value,
            phi_of,
            lambda xi: inv2(pair.potential.hessian(phi_of(xi))),
            name=f"conjugate of {self.potential.name}",
        )


def _grid_argmax(xi, phi, g, chunk=512):
    """For each xi, the grid point maximizing <xi, phi> - G(phi)."""
    out = np.empty_like(xi)
    for k in range(0, len(xi), chunk):
        block = xi[k:k + chunk] @ phi.T - g[None, :]
        out[k:k + chunk] = phi[np.argmax(block, axis=1)]
    return out


def _newton_polish(pot, xi, phi, steps):
    for _ in range(steps):
        r = xi - pot.gradient(phi)
        dphi = np.einsum("...ij,...j->...i", inv2(pot.hessian(phi)), r)
        trial = phi + dphi
        inside = pot.contains(trial)
        # halve steps that would leave the domain
        while not np.all(inside):
            dphi[~inside] *= 0.5
            trial = phi + dphi
            inside = pot.contains(trial)
        phi = trial
        if np.max(np.abs(dphi)) < 1e-15:
            break
    return np.einsum("...i,...i->...", xi, phi) - pot(phi), phi


def legendre_transform(pot: SymplecticPotential, phi_grid, tol=1e-12) -> LegendrePair:
    """Sample G on ``phi_grid`` (shape (N, 2)) and conjugate it at the gradient image."""
    phi = np.asarray(phi_grid, dtype=float).reshape(-1, 2)
    if not np.all(pot.contains(phi)):
        raise DomainError("phi-grid leaves the potential's domain")
    hess = pot.hessian(phi)
    tr = hess[:, 0, 0] + hess[:, 1, 1]
    det = hess[:, 0, 0] * hess[:, 1, 1] - hess[:, 0, 1] * hess[:, 1, 0]
    bad = np.flatnonzero(~((det > tol) & (tr > 0)))
    if bad.size:
        i = int(bad[0])
        raise NonConvexError(
            f"Hessian not positive definite at grid cell {i} (phi = {tuple(phi[i])}), "
            f"det = {det[i]:.3g}"
        )
    g = pot(phi)
    xi = pot.gradient(phi)
    start = _grid_argmax(xi, phi, g)
    f, _ = _newton_polish(pot, xi, start, 30)
    return LegendrePair(phi, g, xi, f, pot)


def square_grid(radius: float, n: int, disk: bool = False) -> np.ndarray:
    """n x n grid on [-radius, radius]^2, optionally clipped to the disk of that radius."""
    t = np.linspace(-radius, radius, n)
    X, Y = np.meshgrid(t, t)
    pts = np.stack([X.ravel(), Y.ravel()], axis=-1)
    if disk:
        pts = pts[np.hypot(pts[:, 0], pts[:, 1]) <= radius + 1e-15]
    return pts


@dataclass(frozen=True)
class HodographReport:
    fenchel: float
    hodograph: float
    tol: float

    @property
    def flagged(self) -> bool:
        return max(self.fenchel, self.hodograph) >= self.tol


def hodograph_check(pair: LegendrePair, h: float = 1e-5, tol: float = 1e-4) -> HodographReport:
    """Fenchel residual |F + G - <xi, phi>| and hodograph residual |phi - grad F|.

    The gradient of F is a central difference of the conjugate evaluated
    next to each matched xi.
    """
    fenchel = np.abs(pair.F + pair.G - np.einsum("ij,ij->i", pair.xi, pair.phi))
    grads = []
    for e in (np.array([h, 0.0]), np.array([0.0, h])):
        fp, _ = pair.conjugate_at(pair.xi + e, start=pair.phi)
        fm, _ = pair.conjugate_at(pair.xi - e, start=pair.phi)
        grads.append((fp - fm) / (2 * h))
    grad_f = np.stack(grads, axis=-1)
    # shift both evaluations by the same stored-vs-recomputed offset so that
    # a corrupted F sample shows up here as well
    offset = pair.F - pair.conjugate_at(pair.xi, start=pair.phi)[0]
    hodo = np.abs(grad_f - pair.phi).max(axis=-1) + np.abs(offset)
    return HodographReport(float(fenchel.max()), float(hodo.max()), tol)


# ----------------------------------------------------- curvature-form contraction

def _curvature_form_raw(pot: SymplecticPotential, u, h):
    """sum_kl G_kl rho_kl with rho_kl the trace of the curvature-form components."""
    chart = PotentialChart(pot)

    def t_field(v):
        # T[i, l, j] = sum_s G^is G^lb d_b G_js
        g_up = chart.metric_up(v)
        dg = fd(chart.metric_dn, v, h)        # (..., j, s, b)
        out = np.zeros(v.shape[:-1] + (2, 2, 2))
        for i in range(2):
            for l in range(2):
                for j in range(2):
                    for s in range(2):
                        for b in range(2):
                            out[..., i, l, j] += g_up[..., i, s] * g_up[..., l, b] * dg[..., j, s, b]
        return out

    g_up = chart.metric_up(u)
    g_dn = chart.metric_dn(u)
    dt = fd(t_field, u, h)                    # (..., i, l, j, a)
    total = np.zeros(u.shape[:-1])
    for k in range(2):
        for l in range(2):
            rho_kl = np.zeros(u.shape[:-1])
            for i in range(2):
                for a in range(2):
                    rho_kl += 0.25 * g_up[..., k, a] * dt[..., i, l, i, a]
            total += g_dn[..., k, l] * rho_kl
    return total


@lru_cache(maxsize=None)
def curvature_form_calibration(h: float = DEFAULT_STEP) -> float:
    """Normalization constant fixed once so that the disk origin gives 8."""
    raw = float(_curvature_form_raw(disk_potential(), np.zeros(2), h))
    return 8.0 / raw


def curvature_form_scalar(pot: SymplecticPotential, u, h=DEFAULT_STEP):
    u = np.asarray(u, dtype=float)
    PotentialChart(pot).check(u, 2 * h)
    val = curvature_form_calibration(DEFAULT_STEP) * _curvature_form_raw(pot, u, h)
    return float(val) if np.ndim(val) == 0 else val


# ------------------------------------------------------------- length estimate

@dataclass(frozen=True)
class SegmentBound:
    length: float
    bound: float

    @property
    def margin(self) -> float:
        return self.bound - self.length


def segment_length_bound(pot: SymplecticPotential, a, b, margin=DISK_MARGIN, tol=1e-8):
    """Hessian length of the segment [a, b] and its convexity bound.

    length = int_0^1 sqrt(<v, Hess G v>) dt with v = b - a, and the bound is
    sqrt(<grad G(b) - grad G(a), v>), which dominates the length by
    Cauchy-Schwarz.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    v = b - a
    if not np.any(v):
        return SegmentBound(0.0, 0.0)
    ts = np.linspace(0.0, 1.0, 65)
    path = a + ts[:, None] * v
    if pot.domain is not None:
        if pot.name == "disk":
            inside = np.hypot(path[:, 0], path[:, 1]) <= 1.0 - margin
        else:
            inside = pot.contains(path)
        if not np.all(inside):
            raise DomainError("segment leaves the domain (or its safety margin)")

    def integrand(t):
        p = a + t * v
        return math.sqrt(max(float(v @ pot.hessian(p) @ v), 0.0))

    length, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=tol, epsrel=1e-12, limit=200)
    rise = float((pot.gradient(b) - pot.gradient(a)) @ v)
    return SegmentBound(float(length), math.sqrt(max(rise, 0.0)))


__all__ = [
    "SymplecticPotential", "quadratic_potential", "linear_potential", "disk_potential",
    "disk_R", "disk_curvature_norm", "DiskValues", "disk_example", "LegendrePair",
    "legendre_transform", "square_grid", "HodographReport", "hodograph_check",
    "curvature_form_scalar", "curvature_form_calibration", "SegmentBound",
    "segment_length_bound", "NonConvexError", "DomainError", "StencilError",
]
