"""Regenerate the shipped fixture bundles in src/viropatch/data/fixtures.

The stacked constructions are given by sign/choice tables found with
scripts/search_family.py and scripts/search_442.py; everything else
(exponents, cell polynomials, charts, the two (k,1)-curves) is derived here.
"""

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from viropatch import bundle
from viropatch.bundle import Bundle, BundleCell
from viropatch.charts import triangle_chart
from viropatch.constructions import blocks_442, family_blocks, to_bundle
from viropatch.gridpatch import GridPatchwork
from viropatch.lattice import LatticePolygon, convex_hull
from viropatch.polynomials import SparsePolynomial
from viropatch.subdivision import LiftingFunction, regular_subdivision
from viropatch.surfaces import SignSeed

OUT = Path(__file__).resolve().parents[1] / "src" / "viropatch" / "data" / "fixtures"
TABLES = Path(__file__).resolve().parent / "fixture_tables.json"
ORACLE = {"t": ["1/8", "1/16"], "resolution": 256}


def poly(terms):
    return SparsePolynomial.from_terms((p, Fraction(c)) for p, c in terms)


def triangulated(name, domain, lift_values, coeffs, description, seed=None):
    dom = convex_hull(domain)
    lift = LiftingFunction(dom, {p: Fraction(v) for p, v in lift_values.items()})
    sub = regular_subdivision(dom, lift)
    cells = []
    for c in sub.cells:
        f = poly((tuple(v), coeffs[tuple(v)]) for v in c.vertices)
        cells.append(BundleCell(c, triangle_chart(c, f), f, 0))
    return Bundle(name, dom, lift, cells, sweep=(1, 1000), seed=seed, oracle=dict(ORACLE),
                  description=description)


def conic():
    return triangulated(
        "conic", [(0, 0), (1, 0), (1, 1), (0, 1)],
        {(0, 0): 0, (1, 0): 0, (0, 1): 0, (1, 1): 1},
        {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1},
        "1 + x + y + t xy on the unit square cut into two triangles",
        seed=SignSeed("point", 1, (Fraction(1, 10), Fraction(1, 10))))


def line3():
    return triangulated(
        "line3", [(0, 0), (2, 0), (1, 1), (0, 1)],
        {(0, 0): 0, (1, 0): 0, (2, 0): 2, (0, 1): 0, (1, 1): 1},
        {(0, 0): 1, (1, 0): -1, (2, 0): 1, (0, 1): -1, (1, 1): 1},
        "three line pieces on a trapezoid")


def grid_bundle(name, signs, choices, description, tridegree=None):
    g = GridPatchwork.from_strings(signs, choices)
    exps = g.exponents()
    coef = g.coefficients(exps)
    cells = []
    for j in range(g.height):
        for i in range(g.width):
            f = poly(((i + di, j + dj), coef[(i + di, j + dj)]) for dj in (0, 1) for di in (0, 1))
            ch = g.square_chart(i, j)
            cells.append(BundleCell(LatticePolygon.rectangle(i, j, i + 1, j + 1), ch, f, ch.node_count))
    dom = LatticePolygon.rectangle(0, 0, g.width, g.height)
    lift = LiftingFunction.from_function(dom, lambda i, j: i * i + j * j)
    seed = SignSeed("point", g.sign(1, 1), (Fraction(1), Fraction(1)))
    return Bundle(name, dom, lift, cells, sweep=(1, 1000), seed=seed, tridegree=tridegree,
                  oracle=dict(ORACLE), description=description)


def nodal2():
    return grid_bundle("nodal2", ["+-+", "-+-"], ["NA"],
                       "two unit squares, the left one carrying a node")


def disk2():
    return grid_bundle("disk2", ["+++", "+-+", "+++"], ["--", "--"],
                       "2x2 grid with the centre coefficient negative: Y- is two disks",
                       tridegree=(1, 1, 2))


def annulus2():
    return grid_bundle("annulus2", ["+++", "+++", "+++"], ["AA", "AA"],
                       "2x2 grid, every coefficient positive: Y- is one annulus on a (1,1) loop",
                       tridegree=(1, 1, 2))


def band2():
    """(x - 1)(x - 4)(1 + y^2): two vertical circles bounding a negative annulus."""
    from viropatch.charts import CellChart, QuadrantChart

    cell = LatticePolygon.rectangle(0, 0, 2, 2)
    a, b = (4, -5, 1), (1, 0, 1)
    f = poly(((i, j), a[i] * b[j]) for i in range(3) for j in range(3) if a[i] * b[j])
    h = Fraction(1, 2)
    lines = QuadrantChart(arcs=[[(h, 0), (h, 2)], [(3 * h, 0), (3 * h, 2)]])
    chart = CellChart(cell, {"++": lines, "+-": lines})
    lift = LiftingFunction.from_function(cell, lambda i, j: 0)
    return Bundle("band2", cell, lift, [BundleCell(cell, chart, f, 0)], sweep=(1, 1000),
                  seed=SignSeed("point", -1, (Fraction(1), Fraction(1))), tridegree=(1, 1, 2),
                  oracle=dict(ORACLE), description="(x - 1)(x - 4)(1 + y^2): Y- is an annulus around a (0,1) loop")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--only", nargs="*")
    args = ap.parse_args()
    tables = json.loads(TABLES.read_text())
    OUT.mkdir(parents=True, exist_ok=True)
    jobs = {"conic": conic, "line3": line3, "nodal2": nodal2, "disk2": disk2, "band2": band2,
            "annulus2": annulus2}
    for key, data in tables["family"].items():
        jobs[f"family_{key}"] = (lambda d=data, key=key: to_bundle(
            family_blocks(d), f"family_{key}", f"(2k,2l,2) family block set, (k,l) = ({d['k']},{d['l']})"))
    if "442" in tables:
        jobs["surface_442"] = lambda: to_bundle(blocks_442(tables["442"]), "surface_442",
                                                "(4,4,2) block set: flipped P, P, Harnack H")
    for name, make in jobs.items():
        if args.only and name not in args.only:
            continue
        b = make()
        bundle.save(b, OUT / f"{name}.json")
        print("wrote", name, file=sys.stderr)


if __name__ == "__main__":
    main()
