from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from viropatch.charts import build_torus_arrangement, glue_charts
from viropatch.checks import glue_bundle
from viropatch.constructions import grid_seed
from viropatch.gridpatch import GridPatchwork
from viropatch.lattice import LatticePolygon
from viropatch.subdivision import LiftingFunction, regular_subdivision
from viropatch.surfaces import (
    HomologyClass,
    SignSeed,
    SurfaceComponent,
    SurfaceError,
    SurfaceTopology,
    Tridegree,
    betti_bounds,
    blow_up_nodes,
    double_cover_topology,
    euler_parity_guard,
    hodge_numbers,
    intersection_form,
    region_components,
    region_totals,
    sign_regions,
    surface_class,
    total_betti_complex,
)


def test_hodge_numbers():
    assert hodge_numbers(4, 4) == (9, 84)
    assert hodge_numbers(2, 2) == (1, 20)  # a K3 surface
    assert hodge_numbers(1, 1) == (0, 6)
    with pytest.raises(ValueError):
        hodge_numbers(0, 3)


def test_betti_bounds_442():
    bb = betti_bounds(4, 4)
    assert (bb.b1_max, bb.b1_max_even, bb.b1_bound, bb.b0_bound) == (93, 92, 93, 47)


def test_total_betti_of_k3():
    assert total_betti_complex(2, 2) == 24


def test_homology_classes():
    a = HomologyClass((1, 0, 3))
    assert a.values == (1, 0, 1)
    assert (a + HomologyClass((1, 1, 1))).values == (0, 1, 0)
    assert intersection_form(surface_class(Tridegree(2, 2, 2)), a) == 0
    assert Tridegree(2, 4, 2).normalized() == Tridegree(4, 2, 2)
    with pytest.raises(ValueError):
        HomologyClass((1,))


def test_surface_components():
    assert SurfaceComponent(2, True).label == "S"
    assert SurfaceComponent(-2, True).label == "S2"
    assert SurfaceComponent(0, False).label == "N2"
    with pytest.raises(SurfaceError):
        SurfaceComponent(1, True)
    with pytest.raises(SurfaceError):
        SurfaceComponent(4, True)


def test_topology_description():
    st_ = SurfaceTopology((SurfaceComponent(2, True),) * 3 + (SurfaceComponent(-2, True),) * 2
                          + (SurfaceComponent(-78, True),))
    assert (st_.b0, st_.chi, st_.b1) == (6, -76, 88)
    assert st_.describe() == "3S + 2S2 + S40"
    assert euler_parity_guard(st_)


def test_seed_validation():
    with pytest.raises(SurfaceError):
        SignSeed("point", 0, (1, 1))
    with pytest.raises(SurfaceError):
        SignSeed("corner", 1)


def pipeline(b, seed=None):
    arr = build_torus_arrangement(glue_bundle(b))
    rc = blow_up_nodes(sign_regions(arr, seed or b.seed))
    return rc, double_cover_topology(rc, *b.tridegree[:2])


# The three synthetic double planes, worked out by hand:
# disk2: Y- is the negative centre vertex in ++ plus the five-vertex cross around
#        (-1,-1) on the torus, two disks, so two spheres.
# annulus2 / band2: two parallel circles of class (a,b) cut the torus into two
#        annuli; the square root w of f changes sign along a core loop exactly
#        when a + b is odd (tridegree (1,1,2)), so (1,1) gives a torus and (0,1)
#        a Klein bottle.

def test_doubled_disks_are_spheres(fixtures):
    rc, st_ = pipeline(fixtures["disk2"])
    assert [c.chi for c in region_components(rc, -1)] == [1, 1]
    assert st_.multiset() == Counter({"S": 2})


def test_doubled_annulus_is_a_torus(fixtures):
    rc, st_ = pipeline(fixtures["annulus2"])
    (comp,) = region_components(rc, -1)
    assert comp.chi == 0 and comp.has_boundary
    assert st_.describe() == "S1"


def test_twisted_annulus_is_a_klein_bottle(fixtures):
    rc, st_ = pipeline(fixtures["band2"])
    (comp,) = region_components(rc, -1)
    assert comp.chi == 0 and not comp.twisted
    assert comp.cycle_classes == ((0, 1),)
    assert st_.describe() == "N2"


def test_other_sign_of_band2(fixtures):
    b = fixtures["band2"]
    rc, st_ = pipeline(b, SignSeed("point", 1, b.seed.value))
    # now the complement annulus (through the axis x = 0) is negative; same class
    assert st_.describe() == "N2"


def test_blow_up_is_required(fixtures):
    arr = build_torus_arrangement(glue_bundle(fixtures["disk2"]))
    with pytest.raises(SurfaceError):
        double_cover_topology(sign_regions(arr, fixtures["disk2"].seed))


def grid_curve(g):
    dom = LatticePolygon.rectangle(0, 0, g.width, g.height)
    sub = regular_subdivision(dom, LiftingFunction.from_function(dom, lambda i, j: i * i + j * j))
    return glue_charts(sub, g.square_charts())


signs = st.sampled_from("+-")
choice = st.sampled_from("ABN")


@st.composite
def grids(draw):
    w, h = draw(st.sampled_from([(2, 2), (4, 2), (2, 4)]))
    rows = ["".join(draw(st.lists(signs, min_size=w + 1, max_size=w + 1))) for _ in range(h + 1)]
    ch = [draw(st.lists(choice, min_size=w, max_size=w)) for _ in range(h)]
    for j in range(h):
        for i in range(w):
            odd = (rows[j][i] + rows[j][i + 1] + rows[j + 1][i] + rows[j + 1][i + 1]).count("-") % 2
            if odd:
                ch[j][i] = "-"
    return GridPatchwork.from_strings(rows, ["".join(r) for r in ch])


@settings(max_examples=40, deadline=None)
@given(grids())
def test_arrangement_agrees_with_grid_combinatorics(g):
    """Region Euler characteristics from the glued arrangement match the direct grid count."""
    arr = build_torus_arrangement(grid_curve(g))
    rc = blow_up_nodes(sign_regions(arr, grid_seed(g)))
    topo = g.torus_topology()
    for s in (1, -1):
        mine = sorted((c.chi, not c.twisted) for c in region_components(rc, s))
        assert mine == sorted(topo.region(s))
    assert region_totals(rc).nodes == g.node_count
    assert topo.curve_components == len(arr.component_classes)
