from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import lattice_polygons
from viropatch.lattice import LatticePolygon, LatticeSegment, area2, convex_hull
from viropatch.subdivision import (
    LiftingFunction,
    Subdivision,
    SubdivisionError,
    adjacency_graph,
    is_convex_subdivision,
    regular_subdivision,
    sweep_orientation,
)


def square(n=2):
    return LatticePolygon.rectangle(0, 0, n, n)


def test_paraboloid_gives_unit_squares():
    sub = regular_subdivision(square(3), LiftingFunction.from_function(square(3), lambda i, j: i * i + j * j))
    assert len(sub.cells) == 9
    assert all(area2(c) == 2 for c in sub.cells)
    assert len(sub.shared_edges) == 12


def test_flat_lift_is_one_cell():
    sub = regular_subdivision(square(), LiftingFunction.from_function(square(), lambda i, j: 0))
    assert sub.cells == (square(),)


def test_zero_lift_does_not_certify_two_cells():
    cells = [LatticePolygon.rectangle(0, 0, 1, 2), LatticePolygon.rectangle(1, 0, 2, 2)]
    sub = Subdivision.from_cells(square(), cells)
    assert not is_convex_subdivision(sub, LiftingFunction.from_function(square(), lambda i, j: 0))
    assert is_convex_subdivision(sub, LiftingFunction.from_function(square(), lambda i, j: abs(i - 1)))


def test_missing_lift_value():
    with pytest.raises(SubdivisionError):
        LiftingFunction(square(), {(0, 0): 0})


def test_cells_must_tile():
    with pytest.raises(SubdivisionError, match="areas"):
        Subdivision.from_cells(square(), [LatticePolygon.rectangle(0, 0, 1, 2)])
    with pytest.raises(SubdivisionError, match="splits an edge"):
        Subdivision.from_cells(square(), [LatticePolygon.rectangle(0, 0, 1, 1), LatticePolygon.rectangle(0, 1, 1, 2),
                                          LatticePolygon.rectangle(1, 0, 2, 2)])


def test_scaled_to_integers():
    lift = LiftingFunction.from_function(square(1), lambda i, j: Fraction(i, 3) + Fraction(j, 2))
    scaled, m = lift.scaled_to_integers()
    assert m == 6 and scaled((1, 1)) == 5


def test_sweep_orientation_is_acyclic_and_counts_incoming():
    sub = regular_subdivision(square(), LiftingFunction.from_function(square(), lambda i, j: i * i + j * j))
    oa = sweep_orientation(sub, (1, 1000))
    assert [len(s) for s in oa.incoming_facets] == [0, 1, 1, 2]
    assert adjacency_graph(sub).number_of_edges() == 4


def test_sweep_parallel_to_edge_is_refused():
    sub = regular_subdivision(square(), LiftingFunction.from_function(square(), lambda i, j: i * i + j * j))
    with pytest.raises(SubdivisionError, match="parallel"):
        sweep_orientation(sub, (1, 0))


@settings(max_examples=250, deadline=None)
@given(lattice_polygons(max_points=6), st.data())
def test_convexity_round_trip(poly, data):
    pts = poly.lattice_points()
    vals = data.draw(st.lists(st.integers(0, 4), min_size=len(pts), max_size=len(pts)))
    lift = LiftingFunction(poly, dict(zip(pts, vals)))
    sub = regular_subdivision(poly, lift)
    assert sum(area2(c) for c in sub.cells) == area2(poly)
    assert is_convex_subdivision(sub, lift)
    again = Subdivision.from_cells(poly, sub.cells)
    assert again.cells == sub.cells
    assert regular_subdivision(poly, lift).cells == sub.cells
