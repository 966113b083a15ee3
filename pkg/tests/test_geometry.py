import math

import numpy as np
import pytest

from sftoric import geometry as geo
from sftoric.momentum import family_for, taub_nut
from sftoric.polygon import LabeledPolygon
from sftoric.potentials import disk_potential, quadratic_potential

from conftest import general_poly


def test_disk_scalar_curvature_at_origin():
    sc = geo.scalar_curvature_4d(disk_potential(), np.zeros(2))
    # s is the Riemannian value, twice the Kähler-normalized one
    assert sc.kahler == pytest.approx(8.0, abs=1e-4)
    assert sc.abreu == pytest.approx(8.0, abs=1e-4)
    assert sc.ratio == pytest.approx(2.0, abs=1e-5)


def test_disk_scalar_curvature_off_center():
    sc = geo.scalar_curvature_4d(disk_potential(), np.array([0.6, 0.0]))
    assert sc.kahler == pytest.approx(0.1980460, abs=1e-4)


def test_flat_potential_has_zero_curvature():
    sc = geo.scalar_curvature_4d(quadratic_potential(), np.array([[0.1, 0.2], [-0.3, 0.4]]))
    np.testing.assert_allclose(sc.s, 0.0, atol=1e-12)


@pytest.mark.parametrize("ab", [(0, 0), (1, 1), (2, 1)])
def test_taub_nut_is_scalar_flat(ab):
    u = np.array([[0.5, 1.0], [-2.0, 3.0], [4.0, 2.0]])
    s = geo.scalar_curvature_4d(taub_nut(*ab), u).s
    assert np.max(np.abs(s)) < 1e-6


def test_scalar_flat_general_family_converges():
    fam = family_for(general_poly(1, 1))
    u = np.array([[0.3, 0.4], [-3.0, 1.0], [5.0, 6.0]])
    s1 = geo.scalar_curvature_4d(fam, u, 1e-3).s
    s2 = geo.scalar_curvature_4d(fam, u, 5e-4).s
    assert np.max(np.abs(geo.richardson(s1, s2))) < 1e-7


def test_stencil_clearance_is_enforced():
    with pytest.raises(geo.StencilError):
        geo.scalar_curvature_4d(taub_nut(1, 1), np.array([0.0, 1e-3]), 1e-3)
    with pytest.raises(geo.StencilError):
        geo.scalar_curvature_4d(disk_potential(), np.array([0.9995, 0.0]))


def test_gaussian_curvature_agrees_with_christoffel_route():
    fam = taub_nut(1, 1)
    u = np.array([[0.5, 1.0], [2.0, 0.7], [-1.0, 3.0]])
    k1 = geo.gaussian_curvature(fam, u)
    k2 = geo.sigma_scalar(fam, u)
    np.testing.assert_allclose(k1, k2, atol=1e-5)


def test_gaussian_curvature_flat_chart():
    # Euclidean family: lambda = |det A| / y is a smooth function whose
    # logarithm is harmonic in the half-plane, so K vanishes
    fam = taub_nut(0, 0)
    u = np.array([[0.5, 1.0], [-2.0, 0.4]])
    np.testing.assert_allclose(geo.gaussian_curvature(fam, u), 0.0, atol=1e-5)


def test_christoffel_identity_converges_on_disk():
    pts = np.array([[0.0, 0.0], [0.3, -0.5], [0.7, 0.2]])
    r = [np.max(geo.christoffels(disk_potential(), pts, h).residual) for h in (2e-3, 1e-3)]
    # five-point stencil: halving h divides the residual by about 16
    assert r[0] / r[1] == pytest.approx(16.0, rel=0.2)


def test_christoffel_identity_exact_for_quadratic():
    res = geo.christoffels(quadratic_potential(((2.0, 0.3), (0.3, 1.0))), np.array([0.1, 0.2])).residual
    assert res < 1e-12


def test_conformal_pipelines_agree_after_extrapolation():
    u = np.array([[0.5, 1.0], [-1.0, 2.5]])
    c = geo.conformal_scalar(taub_nut(1, 1), u, 1e-3, extrapolate=True)
    assert np.max(c.residual / np.maximum(1.0, np.abs(c.via_surface))) < 1e-4


def test_surface_curvature_of_round_sphere():
    # g = dtheta^2 + sin^2(theta) dphi^2 has K = 1
    def metric(v):
        out = np.zeros(v.shape[:-1] + (2, 2))
        out[..., 0, 0] = 1.0
        out[..., 1, 1] = np.sin(v[..., 0]) ** 2
        return out

    k = geo.surface_curvature(metric, np.array([[1.0, 0.3], [2.0, -1.0]]))
    np.testing.assert_allclose(k, 1.0, atol=1e-5)


def test_constant_volume_curvature_is_zero_for_flat_metric():
    assert abs(geo.constant_volume_curvature(quadratic_potential(), np.array([0.2, 0.1]))) < 1e-10


def test_field_sample_shapes_and_identities():
    fam = family_for(general_poly(1, 1))
    grid = geo.GridSpec(-2, 2, 0.5, 3, 4, 3)
    smp = geo.field_sample(fam, grid.points(), grid.h, model=taub_nut(1, 1))
    assert smp.phi.shape == (3, 4, 2)
    assert smp.jacobian.shape == (3, 4, 2, 2)
    np.testing.assert_allclose(smp.blocks.V, grid.points()[..., 1] ** 2, rtol=1e-12)
    np.testing.assert_array_equal(smp.s_sigma, 2 * smp.K_sigma)
    np.testing.assert_array_equal(smp.wminus_sq, 24 * smp.K_sigma * smp.K_sigma)
    assert np.all(smp.quotient >= 0)


@pytest.mark.parametrize(
    "kwargs",
    [dict(nx=2), dict(ny=1), dict(h=0.0), dict(y_min=1e-3), dict(x_min=1, x_max=0)],
)
def test_grid_spec_rejects_bad_values(kwargs):
    with pytest.raises(ValueError):
        geo.GridSpec(**kwargs)


def test_reduced_metric_of_h2s2():
    b = geo.reduced_metric(family_for(LabeledPolygon.h2s2()), (0.0, 1.0))
    assert b.lam == pytest.approx(0.5, abs=1e-12)
    assert b.V == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(geo.mul2(b.G_dn, b.G_up), np.eye(2), atol=1e-12)


def test_metric_blocks_reject_boundary_points():
    with pytest.raises(ValueError):
        geo.metric_blocks(taub_nut(1, 1), 1.0, 0.0)


def test_richardson_cancels_quadratic_error():
    exact = math.pi
    assert geo.richardson(exact + 3e-6, exact + 0.75e-6) == pytest.approx(exact, abs=1e-15)
