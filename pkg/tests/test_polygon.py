import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sftoric.polygon import (
    LabeledPolygon,
    PolygonError,
    boundary_image,
    classify_asymptotic_family,
    classify_polygon,
    polyline_convexity,
    ray_directions,
    validate_polygon,
)

from conftest import GENERAL_D2_CORNER, general_poly, parallel_poly


def test_edge_label_of_corner_polygon():
    rep = validate_polygon(general_poly(data=GENERAL_D2_CORNER))
    assert rep.ok and rep.convex
    assert rep.edge_labels[0] == pytest.approx(math.sqrt(2) / 2, abs=1e-7)


def test_half_strip_is_convex_in_both_orientations():
    for verts in (((1, 1), (1, -1)), ((1, -1), (1, 1))):
        rep = validate_polygon(LabeledPolygon((-1, 1), verts, family="r2s2_model"))
        assert rep.ok and rep.convex
        assert rep.edge_labels == (1.0,)


@pytest.mark.parametrize(
    "kwargs, fragment",
    [
        (dict(lipschitz_points=(1, -1), vertices=((0, 0), (1, 0))), "lipschitz_points[1]"),
        (dict(lipschitz_points=(-1, 1), vertices=((0, 0), (0, 0))), "vertices[1]"),
        (dict(lipschitz_points=(-1, 1), vertices=((0, 0), (1, 0)), s0=0.0), "s0"),
        (dict(lipschitz_points=(-1, 1), vertices=((0, 0), (1, 0)), sd=-1.0), "sd"),
        (dict(lipschitz_points=(-1, 1), vertices=((0, 0), (1, 0)), alpha=-0.5), "alpha"),
        (dict(lipschitz_points=(-1, 1), vertices=((0, 0),)), "vertices"),
    ],
)
def test_validation_errors_name_the_field(kwargs, fragment):
    rep = validate_polygon(LabeledPolygon(**kwargs))
    assert not rep.ok
    assert any(fragment in e for e in rep.errors)
    with pytest.raises(PolygonError):
        rep.raise_if_invalid()


def test_reflex_corner_is_rejected():
    # the boundary turns the wrong way at the middle vertex
    poly = LabeledPolygon((-1, 0, 1), ((0, 0), (1, -1), (1.5, -3)), family="general")
    rep = validate_polygon(poly)
    assert not rep.convex and not rep.ok


def test_collinear_edges_warn_but_pass():
    poly = LabeledPolygon((-1, 0, 1), ((0, 0), (1, -1), (2, -2)), family="general")
    rep = validate_polygon(poly)
    assert rep.ok and rep.warnings


@pytest.mark.parametrize(
    "poly, kind, fam",
    [
        (LabeledPolygon.h2s2(), "parallel_ray", "R2xS2"),
        (LabeledPolygon.taub_nut(1, 1), "general", "ALF"),
        (general_poly(0, 0), "general", "ALE"),
        (parallel_poly(), "parallel_ray", "R2xS2"),
        (LabeledPolygon((), (), boundary_lines=0), "plane", "none"),
        (LabeledPolygon((), (), boundary_lines=1), "half_plane", "none"),
        (LabeledPolygon((), (), boundary_lines=2), "strip", "none"),
    ],
)
def test_classification(poly, kind, fam):
    cls = classify_polygon(poly)
    assert (cls.kind, cls.asymptotic_family) == (kind, fam)


@pytest.mark.parametrize(
    "ab, expected",
    [((0, 0), "ALE"), ((1, 1), "ALF"), ((2, 1), "ALF_like"), ((1, 0), "Exceptional"), ((0, 3), "Exceptional")],
)
def test_asymptotic_family(ab, expected):
    assert classify_asymptotic_family(*ab) == expected


def test_asymptotic_family_rejects_negative():
    with pytest.raises(ValueError):
        classify_asymptotic_family(-1, 0)


@given(st.floats(0, 10), st.floats(0, 10))
def test_asymptotic_family_swap_symmetry(a, b):
    swapped = classify_asymptotic_family(b, a)
    assert (classify_asymptotic_family(a, b) in ("ALE", "ALF")) == (swapped in ("ALE", "ALF"))


@pytest.mark.parametrize(
    "poly, x, expected",
    [
        (LabeledPolygon.h2s2(), 0.0, (1.0, 0.0)),
        (LabeledPolygon.h2s2(), 3.0, (3.0, 1.0)),
        (general_poly(data=GENERAL_D2_CORNER), 0.0, (0.5, -0.5)),
    ],
)
def test_boundary_image_examples(poly, x, expected):
    np.testing.assert_allclose(boundary_image(poly, x), expected, atol=1e-12)


@st.composite
def convex_general_polygons(draw):
    """Convex chains turning from the downward direction toward +phi^1."""
    d = draw(st.integers(1, 5))
    gaps = draw(st.lists(st.floats(0.2, 3.0), min_size=d - 1, max_size=d - 1))
    xs = np.concatenate([[draw(st.floats(-3, 3))], draw(st.floats(-3, 3)) * 0 + np.cumsum([0.0] + gaps)[1:]])
    xs = np.cumsum(np.concatenate([[xs[0]], gaps]))
    angles = sorted(draw(st.lists(st.floats(-1.5, -0.05), min_size=d - 1, max_size=d - 1, unique=True)))
    lengths = draw(st.lists(st.floats(0.2, 3.0), min_size=d - 1, max_size=d - 1))
    p = [np.array([draw(st.floats(-2, 2)), draw(st.floats(-2, 2))])]
    for ang, ln in zip(angles, lengths):
        p.append(p[-1] + ln * np.array([math.cos(ang), math.sin(ang)]))
    return LabeledPolygon(
        tuple(xs), tuple(map(tuple, p)), draw(st.floats(0.2, 3)), draw(st.floats(0.2, 3)),
        draw(st.floats(0, 3)), draw(st.floats(0, 3)), "general",
    )


@settings(max_examples=60, deadline=None)
@given(convex_general_polygons())
def test_boundary_map_is_piecewise_affine_and_hits_vertices(poly):
    rep = validate_polygon(poly)
    assert rep.ok, rep.errors
    xs = np.asarray(poly.lipschitz_points)
    np.testing.assert_allclose(boundary_image(poly, xs), poly.vertices, atol=1e-12)
    for a, b in zip(xs[:-1], xs[1:]):
        t = np.linspace(a, b, 5)[1:4]
        img = boundary_image(poly, t)
        np.testing.assert_allclose(img[0] - 2 * img[1] + img[2], 0, atol=1e-12)
    # beyond the ends the map follows the rays with slopes s_0 and s_d
    left, right = ray_directions(poly)
    np.testing.assert_allclose(boundary_image(poly, xs[0] - 1) - poly.vertices[0], left, atol=1e-12)
    np.testing.assert_allclose(boundary_image(poly, xs[-1] + 1) - poly.vertices[-1], right, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(convex_general_polygons(), st.floats(0.2, 3), st.floats(-2, 2), st.floats(-2, 2), st.floats(0.2, 3))
def test_convexity_invariant_under_positive_affine_maps(poly, a, b, c, d):
    m = np.array([[a, b], [c, d]])
    if np.linalg.det(m) <= 0.05:
        m[1, 1] += abs(np.linalg.det(m)) + 1.0
    left, right = ray_directions(poly)
    verts = np.asarray(poly.vertices)
    before, _ = polyline_convexity(left, verts, right)
    after, _ = polyline_convexity(m @ left, verts @ m.T, m @ right)
    assert before == after
