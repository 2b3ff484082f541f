"""Fixture bundles: JSON files holding a subdivided rectangle, its cell
polynomials and charts, and optional construction metadata.

Numbers that may be fractional are written as ``"p/q"`` strings so the files
stay exact and hand-editable.  :func:`dumps` produces the canonical form;
``dumps(loads(text)) == text`` for any canonical file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .charts import CellChart, ChartNode, QuadrantChart
from .lattice import LatticePolygon, convex_hull
from .polynomials import QUADRANTS, SparsePolynomial, ViroFamily
from .subdivision import LiftingFunction, Subdivision
from .surfaces import SignSeed

FORMAT = "viropatch-bundle"
VERSION = 1


class BundleFormatError(ValueError):
    """The file is not a readable, schema-valid bundle."""


@dataclass(frozen=True)
class BundleCell:
    cell: LatticePolygon
    chart: CellChart
    polynomial: SparsePolynomial | None = None
    nodes: int | None = None


@dataclass
class Bundle:
    name: str
    domain: LatticePolygon
    lift: LiftingFunction
    cells: list[BundleCell]
    sweep: tuple[int, int] | None = None
    seed: SignSeed | None = None
    tridegree: tuple[int, int, int] | None = None
    oracle: dict | None = None
    construction: dict | None = None
    description: str = ""
    extra: dict = field(default_factory=dict)

    def subdivision(self) -> Subdivision:
        return Subdivision.from_cells(self.domain, [c.cell for c in self.cells])

    def charts(self) -> list[CellChart]:
        return [c.chart for c in self.cells]

    def family(self) -> ViroFamily:
        if any(c.polynomial is None for c in self.cells):
            raise BundleFormatError("some cells carry no polynomial")
        return ViroFamily(self.subdivision(), tuple(c.polynomial for c in self.cells), self.lift)


def schema() -> dict:
    text = resources.files("viropatch").joinpath("data/bundle.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


# -- encoding helpers ---------------------------------------------------------

def q(x) -> str:
    return str(Fraction(x))


def _rat(s: str) -> Fraction:
    return Fraction(s)


def _point(p) -> list[str]:
    return [q(p[0]), q(p[1])]


def _poly_vertices(poly: LatticePolygon) -> list[list[int]]:
    return [[int(v.x), int(v.y)] for v in poly.vertices]


def _valued(items) -> list:
    return [[[int(p[0]), int(p[1])], q(v)] for p, v in sorted(items, key=lambda t: (t[0][0], t[0][1]))]


def chart_to_json(chart: CellChart) -> dict:
    lines, sing = [], []
    for qd in QUADRANTS:
        qc = chart.quadrants[qd]
        for a in qc.arcs:
            lines.append({"quadrant": qd, "closed": False, "points": [_point(p) for p in a]})
        for o in qc.ovals:
            lines.append({"quadrant": qd, "closed": True, "points": [_point(p) for p in o]})
        for n in qc.nodes:
            sing.append({"quadrant": qd, "at": _point(n.at), "kind": n.kind})
    out = {"polylines": lines}
    if sing:
        out["singular"] = sing
    return out


def chart_from_json(cell: LatticePolygon, data: dict) -> CellChart:
    arcs = {qd: [] for qd in QUADRANTS}
    ovals = {qd: [] for qd in QUADRANTS}
    nodes = {qd: [] for qd in QUADRANTS}
    for pl in data.get("polylines", []):
        pts = [(_rat(x), _rat(y)) for x, y in pl["points"]]
        (ovals if pl.get("closed", False) else arcs)[pl["quadrant"]].append(pts)
    for s in data.get("singular", []):
        nodes[s["quadrant"]].append(ChartNode((_rat(s["at"][0]), _rat(s["at"][1])), s.get("kind", "node")))
    return CellChart(cell, {qd: QuadrantChart(arcs[qd], ovals[qd], nodes[qd]) for qd in QUADRANTS})


def to_json(b: Bundle) -> dict:
    out: dict[str, Any] = {
        "format": FORMAT,
        "version": VERSION,
        "name": b.name,
        "domain": _poly_vertices(b.domain),
        "lift": _valued(b.lift.values.items()),
        "cells": [],
    }
    if b.description:
        out["description"] = b.description
    for c in b.cells:
        cj: dict[str, Any] = {"vertices": _poly_vertices(c.cell), "chart": chart_to_json(c.chart)}
        if c.polynomial is not None:
            cj["polynomial"] = _valued(c.polynomial.coefficients.items())
        if c.nodes is not None:
            cj["nodes"] = c.nodes
        out["cells"].append(cj)
    if b.sweep is not None:
        out["sweep"] = [int(b.sweep[0]), int(b.sweep[1])]
    if b.seed is not None:
        s: dict[str, Any] = {"kind": b.seed.kind, "sign": "+" if b.seed.sign > 0 else "-"}
        if b.seed.kind == "point":
            s["at"] = _point(b.seed.value)
        elif b.seed.kind == "face":
            s["face"] = int(b.seed.value)
        out["seed"] = s
    if b.tridegree is not None:
        out["tridegree"] = list(b.tridegree)
    if b.oracle is not None:
        out["oracle"] = b.oracle
    if b.construction is not None:
        out["construction"] = b.construction
    return out


def from_json(data: Any) -> Bundle:
    try:
        jsonschema.validate(data, schema())
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise BundleFormatError(f"schema violation at {where}: {e.message}") from None
    try:
        domain = convex_hull(data["domain"])
        lift = LiftingFunction(domain, {tuple(p): _rat(v) for p, v in data["lift"]})
        cells = []
        for cj in data["cells"]:
            cell = convex_hull(cj["vertices"])
            poly = None
            if "polynomial" in cj:
                poly = SparsePolynomial.from_terms((tuple(p), _rat(v)) for p, v in cj["polynomial"])
            cells.append(BundleCell(cell, chart_from_json(cell, cj["chart"]), poly, cj.get("nodes")))
        seed = None
        if "seed" in data:
            sj = data["seed"]
            sign = 1 if sj["sign"] == "+" else -1
            if sj["kind"] == "point":
                if "at" not in sj:
                    raise BundleFormatError("point seed needs 'at'")
                seed = SignSeed("point", sign, (_rat(sj["at"][0]), _rat(sj["at"][1])))
            elif sj["kind"] == "face":
                seed = SignSeed("face", sign, int(sj.get("face", 0)))
            else:
                seed = SignSeed("empty-oval", sign)
        return Bundle(
            name=data["name"],
            domain=domain,
            lift=lift,
            cells=cells,
            sweep=tuple(data["sweep"]) if "sweep" in data else None,
            seed=seed,
            tridegree=tuple(data["tridegree"]) if "tridegree" in data else None,
            oracle=data.get("oracle"),
            construction=data.get("construction"),
            description=data.get("description", ""),
        )
    except BundleFormatError:
        raise
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as e:
        raise BundleFormatError(f"malformed bundle: {e}") from None


def dumps(b: Bundle) -> str:
    return json.dumps(to_json(b), indent=1, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str) -> Bundle:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise BundleFormatError(f"not JSON: {e}") from None
    return from_json(data)


def load(path) -> Bundle:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise BundleFormatError(f"cannot read {path}: {e}") from None
    return loads(text)


def save(b: Bundle, path) -> None:
    Path(path).write_text(dumps(b), encoding="utf-8")
