import pytest
from hypothesis import given, settings

from conftest import lattice_polygons, unimodular
from viropatch.lattice import (
    LatticePolygon,
    LatticeSegment,
    area2,
    boundary_count,
    convex_hull,
    integer_length,
    interior_count,
)


def test_segment_length_is_gcd():
    assert integer_length(LatticeSegment((0, 0), (6, 4))) == 2
    assert integer_length(LatticeSegment((1, 1), (1, 5))) == 4
    assert integer_length(LatticeSegment((0, 0), (3, 5))) == 1


def test_degenerate_segment_rejected():
    with pytest.raises(ValueError):
        LatticeSegment((2, 3), (2, 3))


def test_rectangle_counts():
    r = LatticePolygon.rectangle(0, 0, 4, 2)
    assert area2(r) == 16
    assert boundary_count(r) == 12
    assert interior_count(r) == 3
    assert r.is_rectangle()
    assert len(r.lattice_points()) == 15


def test_hull_drops_collinear_points():
    h = convex_hull([(0, 0), (1, 0), (2, 0), (2, 2), (0, 2), (1, 1)])
    assert [tuple(v) for v in h.vertices] == [(0, 0), (2, 0), (2, 2), (0, 2)]


def test_hull_of_collinear_points_is_a_segment():
    h = convex_hull([(0, 0), (2, 2), (1, 1)])
    assert h.dim == 1 and h.is_degenerate


def test_faces():
    tri = convex_hull([(0, 0), (2, 0), (0, 2)])
    assert tri.has_face(LatticeSegment((2, 0), (0, 2)))
    assert tri.has_face(LatticeSegment((0, 2), (2, 0)))
    assert not tri.has_face(LatticeSegment((0, 0), (1, 1)))
    assert tri.on_boundary((1, 1)) and not tri.contains((1, 1), strict=True)


@settings(max_examples=250, deadline=None)
@given(lattice_polygons())
def test_pick(poly):
    # 2A = 2I + B - 2
    assert area2(poly) == 2 * interior_count(poly) + boundary_count(poly) - 2


@settings(max_examples=250, deadline=None)
@given(lattice_polygons(), unimodular)
def test_unimodular_invariance(poly, m):
    (a, b), (c, d) = m
    image = convex_hull([(a * v.x + b * v.y + 3, c * v.x + d * v.y - 1) for v in poly.vertices])
    assert area2(image) == area2(poly)
    assert boundary_count(image) == boundary_count(poly)
    assert sorted(integer_length(e) for e in image.edges()) == sorted(integer_length(e) for e in poly.edges())
