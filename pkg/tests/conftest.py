import random

import pytest
from hypothesis import strategies as st

from viropatch.fixtures import fixture_names, load_fixture
from viropatch.lattice import convex_hull

coords = st.integers(-6, 6)


@st.composite
def lattice_polygons(draw, min_points=3, max_points=8):
    """Convex lattice polygons of dimension 2, as hulls of random point sets."""
    pts = draw(st.lists(st.tuples(coords, coords), min_size=min_points, max_size=max_points, unique=True))
    xs = {p[0] for p in pts}
    ys = {p[1] for p in pts}
    # reject collinear sets up front instead of filtering many examples away
    a, b = pts[0], pts[1]
    if all((p[0] - a[0]) * (b[1] - a[1]) == (p[1] - a[1]) * (b[0] - a[0]) for p in pts) or len(xs) < 2 or len(ys) < 2:
        pts = pts + [(a[0] + 1, a[1]), (a[0], a[1] + 1)]
    return convex_hull(pts)


unimodular = st.sampled_from([
    ((1, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 1), (0, 1)), ((1, 0), (1, 1)),
    ((-1, 0), (0, 1)), ((2, 1), (1, 1)), ((1, -1), (0, 1)), ((0, -1), (1, 0)),
])


@pytest.fixture(scope="session")
def fixtures():
    return {n: load_fixture(n) for n in fixture_names()}


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
