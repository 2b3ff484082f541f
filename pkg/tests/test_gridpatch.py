from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from viropatch.gridpatch import GridError, GridPatchwork


def test_parsing_and_round_trip():
    g = GridPatchwork.from_strings(["+-+", "-+-"], ["NA"])
    assert (g.width, g.height, g.node_count) == (2, 1, 1)
    assert g.to_strings() == (["+-+", "-+-"], ["NA"])


def test_odd_square_cannot_be_nodal():
    with pytest.raises(GridError, match="cannot be nodal"):
        GridPatchwork.from_strings(["++", "+-"], ["N"])


def test_even_square_needs_a_choice():
    with pytest.raises(GridError, match="needs a choice"):
        GridPatchwork.from_strings(["++", "++"], ["-"])


def test_stack_and_flip():
    a = GridPatchwork.from_strings(["++", "+-"], ["-"])
    b = GridPatchwork.from_strings(["+-", "--"], ["-"])
    s = a.stack(b)
    assert s.height == 2 and s.flip_rows().signs[0] == s.signs[-1]
    with pytest.raises(GridError):
        b.stack(a)


def test_exponents_realise_the_choices():
    g = GridPatchwork.from_strings(["+-+", "-+-", "+-+"], ["AB", "NA"])
    e = g.exponents()
    D = [[e[j][i] + e[j + 1][i + 1] - e[j][i + 1] - e[j + 1][i] for i in range(2)] for j in range(2)]
    assert D == [[1, -1], [0, 1]]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from([1, -1]), min_size=4, max_size=4), st.integers(-3, 3),
       st.sampled_from("AB"))
def test_choice_matches_the_square_polynomial(signs, e0, choice):
    """In the alternating quadrant, A joins the corners (0,0) and (1,1): the value at the
    critical point of a + bx + cy + dxy has their sign."""
    s00, s10, s01, s11 = signs
    if s00 * s10 * s01 * s11 < 0:
        s11 = -s11
    g = GridPatchwork(((s00, s10), (s01, s11)), ((choice,),))
    e = g.exponents(row0=[e0, 0])
    coef = g.coefficients(e)
    q = g.special_quadrant(0, 0)
    e1, e2 = {"++": (0, 0), "-+": (1, 0), "+-": (0, 1), "--": (1, 1)}[q]
    a = coef[(0, 0)]
    b = coef[(1, 0)] * (-1) ** e1
    c = coef[(0, 1)] * (-1) ** e2
    d = coef[(1, 1)] * (-1) ** (e1 + e2)
    crit = a - b * c / d
    joined_00_11 = (crit > 0) == (a > 0)
    assert joined_00_11 == (choice == "A")
    arcs = g.square_chart(0, 0).quadrant(q).arcs
    h = Fraction(1, 2)
    cut = {frozenset(a_) for a_ in (frozenset(map(tuple, arc)) for arc in arcs)}
    assert (frozenset({(0, h), (h, 1)}) in cut) == (choice == "A")
