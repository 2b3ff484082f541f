import warnings
from fractions import Fraction

import pytest
import sympy as sp

from viropatch.checks import construction_of
from viropatch.constructions import (
    BlockSet,
    ConstructionError,
    GridBlock,
    NormalizationWarning,
    ViroComparison,
    assemble_family,
    block_L,
    block_P,
    block_nodes,
    construct_442,
    family_rows,
    flip_y,
    general_position,
    harnack_block_check,
    lifting_profiles,
    m_deficiency,
    merge_blocks,
    shift_y,
    validate_blocks,
    vanishes_at,
)
from viropatch.gridpatch import GridError, GridPatchwork
from viropatch.polynomials import SparsePolynomial
from viropatch.subdivision import is_convex_subdivision
from viropatch.surfaces import SurfaceComponent, SurfaceTopology

x, y = sp.symbols("x y")


def P(e):
    return SparsePolynomial.from_sympy(e)


def test_flip_and_shift():
    f = P(1 + x * y + y ** 3)
    assert flip_y(f, 3) == P(y ** 3 + x * y ** 2 + 1)
    assert shift_y(f, 3) == P(y ** 2 + x * y ** 3 + y ** 5)


def test_flip_normalizes_negative_exponents():
    with pytest.warns(NormalizationWarning):
        g = flip_y(P(1 + y ** 4), 2)
    assert g == P(1 + y ** 4)


def test_block_placement_rows():
    Pb = P(sum(x ** i * y ** j for i in range(3) for j in range(5)))
    for h in (2, 3, 4):
        rows = {p.y for p in block_P(Pb, h).support}
        assert rows == set(range(4 * h - 5, 4 * h))
    assert {p.y for p in block_L(P(1 + y), 3).support} == {2, 3}
    with pytest.raises(ValueError):
        block_P(Pb, 1)


def test_family_rows_cover_the_rectangle():
    rows = family_rows(2, 3)
    assert rows[0] == ("P1", 0, 2) and rows[-1] == ("P4", 11, 12)
    assert all(a[2] == b[1] for a, b in zip(rows, rows[1:]))


@pytest.mark.parametrize("k,l", [(2, 2), (2, 3), (3, 2), (3, 4)])
def test_profiles_certify_the_slabs(k, l):
    from viropatch.constructions import family_slabs
    fP, fL, fM = lifting_profiles(k, l)
    sP, sL = family_slabs(k, l)
    assert is_convex_subdivision(sP, fP) and is_convex_subdivision(sL, fL)


def test_grid_block_checks_mixed_differences():
    g = GridPatchwork.from_strings(["+-", "-+"], ["A"])
    GridBlock(g, ((0, 0), (0, 1)))
    with pytest.raises(GridError):
        GridBlock(g, ((0, 0), (1, 0)))
    b = GridBlock.build(GridPatchwork.from_strings(["+-", "-+"], ["N"]))
    assert GridBlock.from_json(b.to_json()) == b


def test_merge_blocks_detects_disagreement():
    a = P(1 + x + y)
    merge_blocks([("a", a), ("b", P(y + x * y))])
    with pytest.raises(ConstructionError):
        merge_blocks([("a", a), ("b", P(2 * y + x * y))])


def test_block_nodes_sit_on_the_node():
    b = GridBlock.build(GridPatchwork.from_strings(["+-", "-+"], ["N"]))
    t = Fraction(1, 8)
    (pt,) = block_nodes(b, t)
    # positions refer to the block polynomial with coefficients scaled by t^(i^2 + j^2)
    ft = SparsePolynomial({p: c * t ** (p.x ** 2 + p.y ** 2) for p, c in b.polynomial.coefficients.items()})
    e = ft.to_sympy()
    at = {x: pt[0], y: pt[1]}
    assert e.subs(at) == 0 and sp.diff(e, x).subs(at) == 0 and sp.diff(e, y).subs(at) == 0


def test_general_position_of_two_points():
    gp = general_position([(Fraction(1), Fraction(2)), (Fraction(3), Fraction(5))], 1)
    assert gp.ok
    assert vanishes_at(gp.L, gp.nodes) and vanishes_at(gp.M, gp.nodes)


def test_general_position_fails_on_a_vertical_line():
    # two points with the same x: the line x = 1 divides every (1,1) curve through them
    gp = general_position([(Fraction(1), Fraction(2)), (Fraction(1), Fraction(5))], 1)
    assert not gp.ok


def test_harnack_block():
    g = GridPatchwork.from_strings(["-+-", "---", "-+-"], ["--", "--"])
    assert harnack_block_check(g.block_chart()) == (g.torus_topology().curve_components == 2)


def test_viro_comparison_lines():
    assert ViroComparison(88, 84).line() == "b1=88, h11=84, VIRO CONJECTURE VIOLATED BY 4"
    assert ViroComparison(26, 84).line().endswith("within the conjectured bound")


def test_m_deficiency():
    st = SurfaceTopology((SurfaceComponent(2, True),))
    assert m_deficiency(st, 1, 1) == (2, 8, 3)


def test_family_report_2_2(fixtures):
    bs = construction_of(fixtures["family_2_2"])
    rep = assemble_family(2, 2, bs)
    assert rep.ok, rep.failed()
    assert rep.node_count == 8
    assert rep.topology.b1 == 2 * rep.topology.b0 - rep.topology.chi


def test_family_report_rejects_wrong_size(fixtures):
    bs = construction_of(fixtures["family_2_2"])
    with pytest.raises(ConstructionError):
        assemble_family(3, 2, bs)


def test_construct_442_needs_the_right_kind(fixtures):
    with pytest.raises(ConstructionError):
        construct_442(construction_of(fixtures["family_2_2"]))


def test_validate_blocks_all_pass(fixtures):
    bs = construction_of(fixtures["family_2_2"])
    certs = validate_blocks(bs)
    assert all(c.ok for c in certs), [c for c in certs if not c.ok]


def test_block_set_json_round_trip(fixtures):
    bs = construction_of(fixtures["family_2_2"])
    again = BlockSet.from_json(bs.to_json())
    assert again.to_json() == bs.to_json()
