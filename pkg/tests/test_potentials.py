import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sftoric import potentials as pot


def test_disk_closed_values():
    assert pot.disk_R(0.0) == 8.0
    assert pot.disk_R(0.6) == pytest.approx(0.1980460, abs=1e-6)
    assert pot.disk_R(1.0) == pytest.approx(-3.0, abs=1e-12)
    assert pot.disk_curvature_norm(0.0) == pytest.approx(96.0, abs=1e-12)
    assert pot.disk_curvature_norm(1.0) == pytest.approx(36.0, abs=1e-12)


def test_disk_curvature_norm_bounded_on_disk():
    rho = np.linspace(0, 1, 2001)
    vals = pot.disk_curvature_norm(rho)
    assert np.all(vals > 0) and np.max(vals) < 200


def test_disk_example_record():
    d = pot.disk_example(0.6, 0.0)
    assert d.G == pytest.approx(-0.5 * math.log(0.64), abs=1e-14)
    np.testing.assert_allclose(d.G_ij, [[1 / 0.64 + 2 * 0.36 / 0.64**2, 0], [0, 1 / 0.64]], atol=1e-12)
    with pytest.raises(pot.DomainError):
        pot.disk_example(0.8, 0.6)


def test_curvature_form_route_matches_closed_form():
    d = pot.disk_potential()
    assert pot.curvature_form_scalar(d, np.zeros(2)) == pytest.approx(8.0, abs=1e-4)
    assert pot.curvature_form_scalar(d, np.array([0.6, 0.0])) == pytest.approx(pot.disk_R(0.6), abs=1e-4)
    assert pot.curvature_form_scalar(d, np.array([0.0, -0.45])) == pytest.approx(pot.disk_R(0.45), abs=1e-4)


def test_fd_fallback_matches_closed_form():
    d = pot.disk_potential()
    bare = pot.SymplecticPotential(d.value, domain=d.domain)
    p = np.array([0.3, -0.2])
    np.testing.assert_allclose(bare.gradient(p), d.gradient(p), atol=1e-7)
    np.testing.assert_allclose(bare.hessian(p), d.hessian(p), atol=1e-5)


def test_quadratic_self_conjugacy():
    q = pot.quadratic_potential()
    pair = pot.legendre_transform(q, pot.square_grid(1.0, 21))
    np.testing.assert_allclose(pair.F, 0.5 * np.sum(pair.xi**2, axis=-1), atol=1e-10)


def test_disk_legendre_and_hodograph():
    pair = pot.legendre_transform(pot.disk_potential(), pot.square_grid(0.8, 41, disk=True))
    rep = pot.hodograph_check(pair)
    assert rep.fenchel < 1e-4 and rep.hodograph < 1e-4 and not rep.flagged


def test_corrupted_conjugate_is_flagged():
    pair = pot.legendre_transform(pot.disk_potential(), pot.square_grid(0.5, 11, disk=True))
    bad = dataclasses.replace(pair, F=pair.F + 1e-2)
    assert pot.hodograph_check(bad).flagged


def test_legendre_is_an_involution():
    q = pot.quadratic_potential(((2.0, 0.5), (0.5, 1.0)))
    pair = pot.legendre_transform(q, pot.square_grid(1.0, 15))
    f = pair.conjugate()
    back = pot.legendre_transform(f, pair.xi[::7])
    np.testing.assert_allclose(back.xi, pair.phi[::7], atol=1e-12)
    np.testing.assert_allclose(back.F, q(back.xi), atol=1e-10)


def test_non_convex_potential_is_rejected():
    saddle = pot.quadratic_potential(((1.0, 0.0), (0.0, -1.0)))
    with pytest.raises(pot.NonConvexError, match="grid cell"):
        pot.legendre_transform(saddle, pot.square_grid(1.0, 5))
    with pytest.raises(pot.NonConvexError):
        pot.legendre_transform(pot.linear_potential(), pot.square_grid(1.0, 5))


def test_grid_outside_domain_is_rejected():
    with pytest.raises(pot.DomainError):
        pot.legendre_transform(pot.disk_potential(), pot.square_grid(1.0, 5))


def test_segment_bound_equality_for_flat_potential():
    seg = pot.segment_length_bound(pot.quadratic_potential(), (0.0, 0.0), (1.0, 0.0))
    assert seg.length == pytest.approx(1.0, abs=1e-12)
    assert seg.margin == pytest.approx(0.0, abs=1e-8)


def test_segment_bound_disk_value():
    seg = pot.segment_length_bound(pot.disk_potential(), (0.0, 0.0), (0.9, 0.0))
    # along the axis the integrand is sqrt(1 + t^2) / (1 - t^2)
    assert seg.length == pytest.approx(1.72659, abs=1e-5)
    assert seg.bound == pytest.approx(math.sqrt(0.81 / 0.19), abs=1e-12)


def test_degenerate_and_escaping_segments():
    assert pot.segment_length_bound(pot.disk_potential(), (0.2, 0.1), (0.2, 0.1)).bound == 0.0
    with pytest.raises(pot.DomainError):
        pot.segment_length_bound(pot.disk_potential(), (0.0, 0.0), (0.9995, 0.0))


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 0.99), st.floats(0, 2 * math.pi), st.floats(0, 0.99), st.floats(0, 2 * math.pi))
def test_segment_bound_property(r1, t1, r2, t2):
    a = (r1 * math.cos(t1), r1 * math.sin(t1))
    b = (r2 * math.cos(t2), r2 * math.sin(t2))
    seg = pot.segment_length_bound(pot.disk_potential(), a, b)
    assert seg.margin >= -1e-8


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 3), st.floats(-0.5, 0.5), st.floats(0.2, 3), st.floats(-1, 1), st.floats(-1, 1))
def test_fenchel_young_for_quadratics(a, b, c, x, y):
    m = ((a, b), (b, c))
    if a * c - b * b < 0.05:
        return
    q = pot.quadratic_potential(m)
    pair = pot.legendre_transform(q, np.array([[x, y]]))
    minv = np.linalg.inv(np.array(m))
    assert pair.F[0] == pytest.approx(0.5 * pair.xi[0] @ minv @ pair.xi[0], abs=1e-10)
