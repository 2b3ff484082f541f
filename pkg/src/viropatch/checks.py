"""Validation of fixture bundles and the numeric oracle.

``verify_bundle`` runs the checks behind ``viropatch verify`` in a fixed
order and returns every certificate; ``oracle_compare`` traces the Viro
polynomial of a bundle at one parameter value and compares it with the
glued chart.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

from .bundle import Bundle
from .charts import ChartError, GluedCurve, build_torus_arrangement, curve_summary, glue_charts, validate_cell_chart
from .constructions import BlockSet, Certificate, ConstructionError, validate_blocks
from .polynomials import QUADRANTS, NonFaceWarning, is_pns, numeric_chart, restore_nodes, viro_polynomial
from .subdivision import SubdivisionError, is_convex_subdivision, sweep_orientation
from .transversality import TransversalitySetup, is_s_transversal_nodal

DEFAULT_SWEEP = (1, 1000)


def _sweep(b: Bundle):
    return b.sweep if b.sweep is not None else DEFAULT_SWEEP


def construction_of(b: Bundle) -> BlockSet | None:
    if not b.construction:
        return None
    return BlockSet.from_json(b.construction)


def verify_bundle(b: Bundle, stop_at_first: bool = False) -> list[Certificate]:
    out: list[Certificate] = []

    def add(c: Certificate) -> bool:
        out.append(c)
        return c.ok or not stop_at_first

    try:
        sub = b.subdivision()
    except (ValueError, SubdivisionError) as e:
        add(Certificate("subdivision", False, str(e)))
        return out
    ok = is_convex_subdivision(sub, b.lift)
    if not add(Certificate("convexity", ok, "lift certifies the subdivision" if ok
                           else "not convex: the lift does not certify the subdivision")):
        return out
    polys = [c.polynomial for c in b.cells]
    if all(f is not None for f in polys):
        try:
            b.family()
            good = True
            msg = "cell polynomials agree on shared edges"
        except (ValueError, SubdivisionError) as e:
            good, msg = False, str(e)
        if not add(Certificate("truncation compatibility", good, msg)):
            return out
        bad = [i for i, f in enumerate(polys) if not is_pns(f)]
        if not add(Certificate("PNS", not bad, "every cell polynomial is peripherally nonsingular" if not bad
                               else f"cell {bad[0]} is not peripherally nonsingular")):
            return out
    bad_chart = False
    for idx, c in enumerate(b.cells):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonFaceWarning)
            rep = validate_cell_chart(c.chart, c.polynomial, c.nodes)
        if not rep.ok:
            bad_chart = True
            if not add(Certificate("chart", False, f"cell {idx}: {rep.first_problem}")):
                return out
    if not bad_chart:
        out.append(Certificate("chart", True, f"{len(b.cells)} cell charts valid"))
    try:
        oa = sweep_orientation(sub, _sweep(b))
    except SubdivisionError as e:
        add(Certificate("S-transversality", False, str(e)))
        return out
    worst = None
    for idx, c in enumerate(b.cells):
        sing = [n.kind for q in QUADRANTS for n in c.chart.quadrants[q].nodes]
        m = is_s_transversal_nodal(TransversalitySetup(c.cell, oa.incoming_facets[idx], tuple(sing)))
        if worst is None or m.slack < worst[1].slack:
            worst = (idx, m)
    if worst is not None:
        idx, m = worst
        if not add(Certificate("S-transversality", m.holds,
                               f"smallest margin {m.lhs} < {m.rhs} at cell {idx}")):
            return out
    try:
        bs = construction_of(b)
    except ConstructionError as e:
        add(Certificate("construction", False, str(e)))
        return out
    if bs is not None:
        for c in validate_blocks(bs):
            if not add(c):
                return out
    return out


def first_failure(certs) -> Certificate | None:
    return next((c for c in certs if not c.ok), None)


def glue_bundle(b: Bundle) -> GluedCurve:
    return glue_charts(b.subdivision(), b.charts())


def summary_line(g: GluedCurve) -> str:
    if g.domain.is_rectangle():
        return curve_summary(g, build_torus_arrangement(g)).line()
    return f"components: {len(g.components())}, nodes: {g.node_count}"


@dataclass(frozen=True)
class OracleResult:
    t: Fraction
    expected: dict
    traced: dict
    expected_nodes: int
    traced_nodes: int

    @property
    def ok(self) -> bool:
        return self.expected == self.traced and self.expected_nodes == self.traced_nodes

    def line(self) -> str:
        q = " ".join(f"{k}:{self.traced[k]}/{self.expected[k]}" for k in QUADRANTS)
        return (f"t={self.t}: per-quadrant components traced/glued {q}; "
                f"nodes {self.traced_nodes}/{self.expected_nodes} {'match' if self.ok else 'MISMATCH'}")


def oracle_compare(b: Bundle, t, resolution: int = 256) -> OracleResult:
    """Trace the Viro polynomial at ``t`` and compare with the glued chart.

    When the cells carry nodes, one coefficient per node is corrected so the
    nodes persist (the uncorrected polynomial smooths them).
    """
    t = Fraction(t)
    g = glue_bundle(b)
    fam = b.family()
    f = restore_nodes(fam, t) if g.node_count else viro_polynomial(fam, t)
    nc = numeric_chart(f, resolution=resolution)
    expected = g.quadrant_components()
    return OracleResult(t, expected, dict(nc.components), g.node_count, nc.node_count)


def oracle_pairs(b: Bundle) -> list[Fraction]:
    ts = (b.oracle or {}).get("t", ["1/8", "1/16"])
    return [Fraction(x) for x in ts]


__all__ = ["OracleResult", "construction_of", "first_failure", "glue_bundle", "oracle_compare",
           "oracle_pairs", "summary_line", "verify_bundle", "ChartError"]
