from fractions import Fraction

import pytest
import sympy as sp

from viropatch.charts import (
    CellChart,
    ChartError,
    GluingError,
    QuadrantChart,
    build_torus_arrangement,
    curve_summary,
    empty_ovals,
    glue_charts,
    triangle_chart,
    validate_cell_chart,
)
from viropatch.lattice import LatticePolygon, convex_hull
from viropatch.polynomials import SparsePolynomial
from viropatch.subdivision import Subdivision

x, y = sp.symbols("x y")
H = Fraction(1, 2)
SQ = LatticePolygon.rectangle(0, 0, 1, 1)


def P(e):
    return SparsePolynomial.from_sympy(e)


def test_unknown_quadrant_label():
    with pytest.raises(ChartError):
        CellChart(SQ, {"+*": QuadrantChart()})


def test_triangle_chart_of_a_line():
    tri = convex_hull([(0, 0), (1, 0), (0, 1)])
    f = P(1 - x + y)
    ch = triangle_chart(tri, f)
    rep = validate_cell_chart(ch, f)
    assert rep.ok, rep.problems
    # one arc per quadrant in which the twisted signs are not all equal
    assert sum(len(ch.quadrant(q).arcs) for q in ch.quadrants) == 3


def test_arc_ending_at_a_vertex_is_rejected():
    ch = CellChart(SQ, {"++": QuadrantChart(arcs=[[(0, 0), (H, H), (1, H)]])})
    rep = validate_cell_chart(ch)
    assert not rep.ok and "lattice vertex" in rep.first_problem


def test_crossing_count_must_match_roots():
    f = P(1 - x + y + x * y)  # bottom edge 1 - x has one positive root
    ch = CellChart(SQ, {"++": QuadrantChart(arcs=[[(H, 0), (H, 1)]])})
    rep = validate_cell_chart(ch, f)
    assert not rep.ok
    assert any("real roots" in p for p in rep.problems)


def test_crossing_pieces_must_not_meet():
    ch = CellChart(SQ, {"++": QuadrantChart(arcs=[[(H, 0), (H, 1)], [(0, H), (1, H)]])})
    rep = validate_cell_chart(ch)
    assert not rep.ok and "undeclared" in rep.first_problem


def test_declared_node_makes_crossing_legal():
    # (1 - x)(1 - y): both lines in ++, one of them in -+ and +-, nothing in --
    f = P((1 - x) * (1 - y))
    vert, horiz = [(H, 0), (H, H), (H, 1)], [(0, H), (H, H), (1, H)]
    ch = CellChart(SQ, {"++": QuadrantChart(arcs=[vert, horiz], nodes=[((H, H), "node")]),
                        "+-": QuadrantChart(arcs=[[(H, 0), (H, 1)]]),
                        "-+": QuadrantChart(arcs=[[(0, H), (1, H)]])})
    rep = validate_cell_chart(ch, f, expected_nodes=1)
    assert rep.ok, rep.problems
    assert not validate_cell_chart(ch, f, expected_nodes=0).ok


def test_node_needs_four_branch_ends():
    ch = CellChart(SQ, {"++": QuadrantChart(arcs=[[(H, 0), (H, H), (H, 1)]], nodes=[((H, H), "node")])})
    rep = validate_cell_chart(ch)
    assert not rep.ok and "incident branch ends" in rep.first_problem


def two_squares(right_arcs):
    left = LatticePolygon.rectangle(0, 0, 1, 1)
    right = LatticePolygon.rectangle(1, 0, 2, 1)
    dom = LatticePolygon.rectangle(0, 0, 2, 1)
    sub = Subdivision.from_cells(dom, [left, right])
    lc = CellChart(left, {"++": QuadrantChart(arcs=[[(H, 0), (1, H)]])})
    rc = CellChart(right, {"++": QuadrantChart(arcs=right_arcs)})
    return sub, [lc, rc]


def test_gluing_mismatch_names_the_edge():
    sub, charts = two_squares([])
    with pytest.raises(GluingError, match=r"edge \(1,0\)-\(1,1\)"):
        glue_charts(sub, charts)


def test_gluing_joins_across_a_shared_edge():
    sub, charts = two_squares([[(1, Fraction(1, 3)), (Fraction(3, 2), 1)]])
    # the right arc ends on the top edge; its copies in the other quadrants close the curve
    with pytest.raises(GluingError):
        glue_charts(sub, charts)


def test_torus_arrangement_of_an_oval():
    # one oval around the centre of the ++ copy of a 2x2 square
    dom = LatticePolygon.rectangle(0, 0, 2, 2)
    oval = [(H, H), (3 * H, H), (3 * H, 3 * H), (H, 3 * H)]
    ch = CellChart(dom, {"++": QuadrantChart(ovals=[oval])})
    g = glue_charts(Subdivision.from_cells(dom, [dom]), [ch])
    arr = build_torus_arrangement(g)
    s = curve_summary(g, arr)
    assert (s.components, s.ovals, s.nodes) == (1, 1, 0)
    assert s.classes == ((0, 0),)
    assert len(empty_ovals(arr)) == 1
