import warnings
from fractions import Fraction

import pytest
import sympy as sp

from viropatch.lattice import LatticePolygon, LatticeSegment
from viropatch.polynomials import (
    NonFaceWarning,
    SparsePolynomial,
    ViroFamily,
    edge_root_data,
    is_pns,
    moment_map,
    numeric_chart,
    restore_nodes,
    singular_points,
    truncation,
    viro_polynomial,
)
from viropatch.subdivision import LiftingFunction, SubdivisionError, regular_subdivision

x, y = sp.symbols("x y")


def P(expr):
    return SparsePolynomial.from_sympy(expr)


def test_zero_coefficients_are_dropped():
    f = SparsePolynomial({(0, 0): 1, (1, 0): 0})
    assert f.support == [(0, 0)]
    assert P(x - x).is_zero()


def test_sympy_round_trip():
    e = 3 * x ** 2 * y - Fraction(1, 2) * y + 7
    assert sp.expand(P(e).to_sympy() - sp.nsimplify(e)) == 0


def test_truncation_to_edge_and_vertex():
    f = P(1 + x + y + x * y + 5 * x ** 2)
    bottom = LatticeSegment((0, 0), (2, 0))
    assert truncation(f, bottom) == P(1 + x + 5 * x ** 2)
    assert truncation(f, (2, 0)) == P(5 * x ** 2)


def test_truncation_warns_off_face():
    f = P(1 + x + y)
    with pytest.warns(NonFaceWarning):
        truncation(f, LatticeSegment((0, 0), (1, 1)))


def test_edge_root_counts():
    f = P((x - 1) * (x - 2) * (x + 3) + y)
    rd = edge_root_data(f, LatticeSegment((0, 0), (3, 0)))
    assert (rd.positive_roots, rd.negative_roots, rd.has_multiple_root) == (2, 1, False)


def test_edge_root_counts_multiplicity():
    f = P((x - 1) ** 2 + y)
    rd = edge_root_data(f, LatticeSegment((0, 0), (2, 0)))
    assert rd.positive_roots == 2 and rd.has_multiple_root


def test_pns():
    assert is_pns(P(1 + x + y))
    assert is_pns(P((x - 1) * (x - 2) + y))
    assert not is_pns(P((x - 1) ** 2 + y))
    with pytest.raises(ValueError):
        is_pns(P(1 + x))


def test_moment_map_quadrants():
    sq = LatticePolygon.rectangle(0, 0, 1, 1)
    assert moment_map(sq, (1, 1)) == (Fraction(1, 2), Fraction(1, 2))
    assert moment_map(sq, (-1, 1)) == (Fraction(-1, 2), Fraction(1, 2))
    with pytest.raises(ValueError):
        moment_map(sq, (0, 1))


def unit_square_family():
    sq = LatticePolygon.rectangle(0, 0, 2, 1)
    lift = LiftingFunction.from_function(sq, lambda i, j: (i - 1) ** 2)
    sub = regular_subdivision(sq, lift)
    left = P(1 - x + y - x * y)
    right = P(-x + x ** 2 - x * y + x ** 2 * y)
    return ViroFamily(sub, (left, right), lift)


def test_viro_polynomial_powers_of_t():
    fam = unit_square_family()
    f = viro_polynomial(fam, Fraction(1, 2))
    assert f[(0, 0)] == Fraction(1, 2) and f[(1, 0)] == -1 and f[(2, 1)] == Fraction(1, 2)


def test_family_rejects_disagreeing_cells():
    fam = unit_square_family()
    with pytest.raises(ValueError, match="disagree"):
        ViroFamily(fam.subdivision, (fam.polynomials[0], P(-2 * x + x ** 2 - x * y + x ** 2 * y)), fam.lift)


def test_family_rejects_monomial_above_its_cell():
    sq = LatticePolygon.rectangle(0, 0, 2, 1)
    lift = LiftingFunction.from_function(sq, lambda i, j: 5 if (i, j) == (1, 0) else 0)
    sub = regular_subdivision(sq, lift)
    assert len(sub.cells) == 1
    with pytest.raises(SubdivisionError, match="above"):
        ViroFamily(sub, (P(1 + x + x ** 2 + y + x ** 2 * y),), lift)


def test_singular_points_of_a_node():
    f = P((x - 1) ** 2 - (y - 1) ** 2 * 4 + 0 * x)
    pts = singular_points(f)
    assert len(pts) == 1 and pts[0] == pytest.approx((1.0, 1.0))


def test_numeric_chart_of_a_line():
    nc = numeric_chart(P(1 + x - y), resolution=128)
    # 1 + x = y: one arc in ++ (x > 0), one in -+ (-1 < x < 0), one in -- (x < -1)
    assert nc.components == {"++": 1, "-+": 1, "+-": 0, "--": 1}
    assert nc.node_count == 0


def test_numeric_chart_finds_a_node():
    # branches of slope +-1/2 through (1, 1); every edge polynomial is squarefree
    f = P((x - 1) ** 2 - 4 * (y - 1) ** 2 + (x - 1) ** 2 * (y - 1) ** 2)
    assert is_pns(f)
    nc = numeric_chart(f, resolution=256)
    assert nc.node_count == 1
    assert nc.nodes["++"][0] == pytest.approx((0.0, 0.0), abs=1e-9)


def test_restore_nodes_keeps_the_node():
    sq = LatticePolygon.rectangle(0, 0, 2, 1)
    lift = LiftingFunction.from_function(sq, lambda i, j: (i - 1) ** 2)
    sub = regular_subdivision(sq, lift)
    # the left square carries the node (1 - x)(1 - y) = 0 at (1, 1)
    left = P((1 - x) * (1 - y))
    right = P(-x + x ** 2 + x * y + x ** 2 * y)
    fam = ViroFamily(sub, (left, right), lift)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        f = restore_nodes(fam, Fraction(1, 8))
    # the corrected coefficient is a float, so check numerically
    assert f != viro_polynomial(fam, Fraction(1, 8))
    assert numeric_chart(f, resolution=256).node_count == 1
