import pytest

from viropatch.lattice import LatticePolygon, LatticeSegment
from viropatch.transversality import (
    HypothesisFailure,
    TransversalitySetup,
    brusotti_codim,
    codim_prescribed,
    family_level_checks,
    generalposition_ledger,
    incoming_lattice_count,
    is_s_transversal_nodal,
    singularity_weight,
    theoremfinal_check,
)

SQ2 = LatticePolygon.rectangle(0, 0, 2, 2)


def test_weights():
    assert singularity_weight("node") == 0
    assert singularity_weight("cusp") == 1
    with pytest.raises(ValueError):
        singularity_weight("tacnode")


def test_margin_counts_free_edges_only():
    setup = TransversalitySetup(SQ2, [LatticeSegment((0, 0), (2, 0)), LatticeSegment((0, 2), (0, 0))],
                                ("node", "cusp"))
    m = is_s_transversal_nodal(setup)
    assert (m.lhs, m.rhs, m.holds) == (1, 4, True)


def test_all_edges_incoming_with_a_cusp_fails():
    setup = TransversalitySetup(SQ2, [e for e in SQ2.edges()], ("cusp",))
    m = is_s_transversal_nodal(setup)
    assert not m and m.slack == -1


def test_incoming_must_be_cell_edges():
    with pytest.raises(ValueError, match="not an edge"):
        TransversalitySetup(SQ2, [LatticeSegment((0, 0), (1, 1))])


def test_incoming_overlap_rejected():
    with pytest.raises(ValueError, match="overlap"):
        incoming_lattice_count([LatticeSegment((0, 0), (4, 0)), LatticeSegment((1, 0), (2, 0))])


@pytest.mark.parametrize("k", range(1, 8))
def test_incoming_counts_of_the_stacking_facets(k):
    assert incoming_lattice_count([LatticeSegment((0, 3), (4 * k, 3))]) == 4 * k
    assert incoming_lattice_count([LatticeSegment((0, 1), (k, 1))]) == k


def test_codim_prescribed():
    tri = LatticePolygon(((0, 0), (3, 0), (0, 3)))  # 9 boundary points
    assert codim_prescribed(tri, 2, 4) == 10
    res = codim_prescribed(tri, 2, 5)
    assert isinstance(res, HypothesisFailure)
    assert "2k+m < b" in str(res)
    with pytest.raises(ValueError):
        codim_prescribed(tri, -1, 0)


def test_brusotti():
    assert brusotti_codim(5) == 5
    with pytest.raises(ValueError):
        brusotti_codim(-1)


def test_ledger_rows():
    led = generalposition_ledger(2, 3)
    assert dict(led.rows())["dim E"] == 10 * 6 + 8 + 12
    assert dict(led.rows())["codim A"] == 36
    with pytest.raises(ValueError):
        generalposition_ledger(0, 1)


def test_theoremfinal_failure_when_too_many_nodes():
    big = LatticePolygon.rectangle(0, 0, 4, 4)
    small = LatticePolygon.rectangle(0, 0, 1, 1)
    inc = [LatticeSegment((0, 0), (4, 0))]
    fc = theoremfinal_check(big, small, small, 6, inc, [], [])
    assert not fc.ok and fc.main.lhs == 16 and fc.main.rhs == 16


def test_family_levels_enumerated():
    assert [h for h, _ in family_level_checks(3, 4)] == [2, 3, 4]
